//! Whole-grid labeling of connected components on the topological grid.
//!
//! Labeling proceeds top-down by cell order. Voxel labels are first copied
//! onto the 3-cells. A face, edge or corner cell is *active* when the
//! component labels of its neighborhood, reduced by [`once`], are non-empty;
//! the reduced sequence is the cell's signature and identifies the
//! components the cell bounds. 2-cells and 1-cells are grouped into
//! components by a depth-first flood fill over connected cells with equal
//! signatures; every active 0-cell forms a component of its own. Labels are
//! independent namespaces per cell order.

use crate::error::{Error, Result};
use crate::topogrid::{for_each_connected, gamma_unchecked, CellCoord, CellOrder, GridShape};

/// A dense volume of segment labels, one per voxel, row-major with the third
/// axis fastest. Labels must be positive; 0 marks inactive cells on the
/// topological grid and cannot name a segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentLabelMap {
    shape: GridShape,
    labels: Vec<u32>,
}

impl SegmentLabelMap {
    pub fn new(shape: GridShape, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != shape.voxel_count() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} voxel labels, got {}",
                shape.voxel_count(),
                labels.len()
            )));
        }
        if let Some(pos) = labels.iter().position(|&l| l == 0) {
            let [_, n2, n3] = shape.voxel_extents();
            let r3 = pos as u32 % n3;
            let r2 = (pos as u32 / n3) % n2;
            let r1 = pos as u32 / (n3 * n2);
            return Err(Error::ZeroSegmentLabel(r1 + 1, r2 + 1, r3 + 1));
        }
        Ok(SegmentLabelMap { shape, labels })
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.labels
    }

    /// Label at a 1-based voxel coordinate.
    pub fn get(&self, r: [u32; 3]) -> u32 {
        let [_, n2, n3] = self.shape.voxel_extents();
        let idx = ((r[0] - 1) as usize * n2 as usize + (r[1] - 1) as usize) * n3 as usize
            + (r[2] - 1) as usize;
        self.labels[idx]
    }

    /// Copies the voxel sub-range `start..=end` (1-based, inclusive) into a
    /// stand-alone volume.
    pub fn extract_box(&self, start: [u32; 3], end: [u32; 3]) -> Result<SegmentLabelMap> {
        let sub = GridShape::new(
            end[0] - start[0] + 1,
            end[1] - start[1] + 1,
            end[2] - start[2] + 1,
        )?;
        let mut labels = Vec::with_capacity(sub.voxel_count());
        for r1 in start[0]..=end[0] {
            for r2 in start[1]..=end[1] {
                for r3 in start[2]..=end[2] {
                    if !self.shape.contains_voxel([r1, r2, r3]) {
                        return Err(Error::OutOfBounds(r1, r2, r3));
                    }
                    labels.push(self.get([r1, r2, r3]));
                }
            }
        }
        SegmentLabelMap::new(sub, labels)
    }
}

/// Labels over the full topological grid. Inactive cells carry 0; active
/// cells carry a positive label in the namespace of their cell order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologicalLabelMap {
    shape: GridShape,
    dims: [u32; 3],
    labels: Vec<u32>,
}

impl TopologicalLabelMap {
    pub fn zeros(shape: GridShape) -> Self {
        let dims = shape.topo_extents();
        TopologicalLabelMap {
            shape,
            dims,
            labels: vec![0; shape.cell_count()],
        }
    }

    /// Wraps an existing cell array; `labels` must be row-major over the
    /// topological extents of `shape`, third axis fastest.
    pub fn from_raw(shape: GridShape, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != shape.cell_count() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} cells, got {}",
                shape.cell_count(),
                labels.len()
            )));
        }
        let dims = shape.topo_extents();
        Ok(TopologicalLabelMap {
            shape,
            dims,
            labels,
        })
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn index(&self, t: CellCoord) -> usize {
        debug_assert!(self.shape.contains_cell(t));
        ((t.t1 - 1) as usize * self.dims[1] as usize + (t.t2 - 1) as usize)
            * self.dims[2] as usize
            + (t.t3 - 1) as usize
    }

    #[inline]
    pub fn get(&self, t: CellCoord) -> u32 {
        self.labels[self.index(t)]
    }

    #[inline]
    pub fn set(&mut self, t: CellCoord, label: u32) {
        let i = self.index(t);
        self.labels[i] = label;
    }

    /// Visits every cell of the grid in scan order (axis 3 fastest).
    pub fn for_each_cell(&self, mut f: impl FnMut(CellCoord)) {
        let [d1, d2, d3] = self.dims;
        for t1 in 1..=d1 {
            for t2 in 1..=d2 {
                for t3 in 1..=d3 {
                    f(CellCoord::new(t1, t2, t3));
                }
            }
        }
    }
}

/// The reduced neighbor-label sequence of a cell: the positive labels that
/// occur exactly once, ascending, zero-padded to the neighborhood width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    vals: [u32; 6],
    width: u8,
}

impl Signature {
    /// The cell bounds at least one component.
    pub fn is_active(&self) -> bool {
        self.vals[0] != 0
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.vals[..self.width as usize]
    }

    /// The non-zero prefix.
    pub fn labels(&self) -> &[u32] {
        let n = self.vals[..self.width as usize]
            .iter()
            .position(|&v| v == 0)
            .unwrap_or(self.width as usize);
        &self.vals[..n]
    }
}

/// Keeps the positive values of `xs` that occur exactly once, sorted
/// ascending and right-padded with zeros to the input length. `xs` must not
/// exceed six entries.
pub fn once(xs: &[u32]) -> Signature {
    debug_assert!(xs.len() <= 6);
    let mut out = [0u32; 6];
    let mut n = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let dup = xs
            .iter()
            .enumerate()
            .any(|(k, &y)| k != i && y == x);
        if !dup {
            out[n] = x;
            n += 1;
        }
    }
    out[..n].sort_unstable();
    Signature {
        vals: out,
        width: xs.len() as u8,
    }
}

/// Reads the current labels of the neighborhood of `t` in canonical order
/// and reduces them with [`once`]. `t` must have order 0, 1 or 2.
pub fn signature(t: CellCoord, tau: &TopologicalLabelMap) -> Signature {
    debug_assert!(t.order() != CellOrder::Voxel);
    let neighbors = gamma_unchecked(t);
    let mut xs = [0u32; 6];
    for (i, c) in neighbors.iter().enumerate() {
        xs[i] = tau.get(*c);
    }
    once(&xs[..neighbors.len()])
}

/// Bounding relation of one cell order: row `i - 1` holds the signature of
/// component `i`, the sorted labels of the `(c+1)`-components it bounds,
/// zero-padded to width `6 - 2c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodTable {
    order: CellOrder,
    width: usize,
    data: Vec<u32>,
}

impl NeighborhoodTable {
    pub fn new(order: CellOrder) -> Self {
        NeighborhoodTable {
            order,
            width: order.neighbor_count(),
            data: Vec::new(),
        }
    }

    pub fn from_rows(order: CellOrder, data: Vec<u32>) -> Result<Self> {
        let width = order.neighbor_count();
        if width == 0 || data.len() % width != 0 {
            return Err(Error::ShapeMismatch(format!(
                "neighborhood table of order {} must have row width {width}",
                order.index()
            )));
        }
        Ok(NeighborhoodTable { order, width, data })
    }

    pub fn order(&self) -> CellOrder {
        self.order
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn push(&mut self, sig: &Signature) {
        debug_assert_eq!(sig.as_slice().len(), self.width);
        self.data.extend_from_slice(sig.as_slice());
    }

    /// Signature row of component `label` (1-based).
    pub fn row(&self, label: u32) -> &[u32] {
        let i = (label - 1) as usize * self.width;
        &self.data[i..i + self.width]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }
}

/// Copies every voxel label onto its 3-cell, leaving all other cells at 0.
/// Returns the map and the maximum segment label.
pub fn label_3cells(sigma: &SegmentLabelMap) -> (TopologicalLabelMap, u32) {
    let shape = *sigma.shape();
    let mut tau = TopologicalLabelMap::zeros(shape);
    let mut max = 0;
    let [n1, n2, n3] = shape.voxel_extents();
    for r1 in 1..=n1 {
        for r2 in 1..=n2 {
            for r3 in 1..=n3 {
                let label = sigma.get([r1, r2, r3]);
                tau.set(CellCoord::new(2 * r1 - 1, 2 * r2 - 1, 2 * r3 - 1), label);
                max = max.max(label);
            }
        }
    }
    (tau, max)
}

/// Flood-fills components of `order` (1 or 2). Every unlabeled active cell
/// seeds a new component that expands over connected cells of equal
/// signature. Requires all labels of the order above to be final.
pub fn label_components(
    tau: &mut TopologicalLabelMap,
    order: CellOrder,
) -> Result<(u32, NeighborhoodTable)> {
    assert!(
        order == CellOrder::Face || order == CellOrder::Edge,
        "flood fill applies to 2-cells and 1-cells only"
    );
    let shape = *tau.shape();
    let mut count: u32 = 0;
    let mut table = NeighborhoodTable::new(order);
    let mut stack: Vec<CellCoord> = Vec::new();
    let [d1, d2, d3] = shape.topo_extents();
    for t1 in 1..=d1 {
        for t2 in 1..=d2 {
            for t3 in 1..=d3 {
                let t = CellCoord::new(t1, t2, t3);
                if t.order() != order || tau.get(t) != 0 {
                    continue;
                }
                let seed_sig = signature(t, tau);
                if !seed_sig.is_active() {
                    continue;
                }
                if count == u32::MAX {
                    return Err(Error::LabelOverflow {
                        what: "components",
                        required: count as u64 + 1,
                    });
                }
                count += 1;
                table.push(&seed_sig);
                stack.push(t);
                while let Some(u) = stack.pop() {
                    if tau.get(u) != 0 {
                        continue;
                    }
                    tau.set(u, count);
                    for_each_connected(u, &shape, |v| {
                        if v.order() == order
                            && tau.get(v) == 0
                            && signature(v, tau) == seed_sig
                        {
                            stack.push(v);
                        }
                    });
                }
            }
        }
    }
    Ok((count, table))
}

/// Labels every active 0-cell as a component of its own. Requires 1-cell
/// labels to be final.
pub fn label_0cells(tau: &mut TopologicalLabelMap) -> (u32, NeighborhoodTable) {
    let mut count: u32 = 0;
    let mut table = NeighborhoodTable::new(CellOrder::Corner);
    let [d1, d2, d3] = tau.shape().topo_extents();
    for t1 in 1..=d1 {
        for t2 in 1..=d2 {
            for t3 in 1..=d3 {
                let t = CellCoord::new(t1, t2, t3);
                if t.order() != CellOrder::Corner {
                    continue;
                }
                let sig = signature(t, tau);
                if sig.is_active() {
                    count += 1;
                    table.push(&sig);
                    tau.set(t, count);
                }
            }
        }
    }
    (count, table)
}

/// A fully labeled volume: the topological label map plus, per cell order,
/// the component count and bounding table.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub tau: TopologicalLabelMap,
    pub max_segment_label: u32,
    pub face_count: u32,
    pub curve_count: u32,
    pub point_count: u32,
    pub face_table: NeighborhoodTable,
    pub curve_table: NeighborhoodTable,
    pub point_table: NeighborhoodTable,
}

impl Extraction {
    /// Component count for a cell order, the maximum segment label for
    /// voxels.
    pub fn count(&self, order: CellOrder) -> u32 {
        match order {
            CellOrder::Corner => self.point_count,
            CellOrder::Edge => self.curve_count,
            CellOrder::Face => self.face_count,
            CellOrder::Voxel => self.max_segment_label,
        }
    }

    pub fn table(&self, order: CellOrder) -> &NeighborhoodTable {
        match order {
            CellOrder::Corner => &self.point_table,
            CellOrder::Edge => &self.curve_table,
            CellOrder::Face => &self.face_table,
            CellOrder::Voxel => panic!("voxels have no neighborhood table"),
        }
    }
}

/// Runs the full labeling: 3-cells, then faces, curves and corner points.
pub fn extract_full(sigma: &SegmentLabelMap) -> Result<Extraction> {
    let (mut tau, max_segment_label) = label_3cells(sigma);
    let (face_count, face_table) = label_components(&mut tau, CellOrder::Face)?;
    let (curve_count, curve_table) = label_components(&mut tau, CellOrder::Edge)?;
    let (point_count, point_table) = label_0cells(&mut tau);
    Ok(Extraction {
        tau,
        max_segment_label,
        face_count,
        curve_count,
        point_count,
        face_table,
        curve_table,
        point_table,
    })
}

/// Diagnostic pass: returns, for every segment label whose voxel set is not
/// 6-connected, the label and its number of connected parts. The labeling
/// algorithms themselves trust the input; a label with disconnected parts
/// simply names one 3-component spanning all of them.
pub fn validate_segments(sigma: &SegmentLabelMap) -> Vec<(u32, u32)> {
    use std::collections::HashMap;

    let shape = *sigma.shape();
    let [n1, n2, n3] = shape.voxel_extents();
    let total = shape.voxel_count();
    let mut visited = vec![false; total];
    let mut parts: HashMap<u32, u32> = HashMap::new();
    let idx = |r: [u32; 3]| -> usize {
        ((r[0] - 1) as usize * n2 as usize + (r[1] - 1) as usize) * n3 as usize
            + (r[2] - 1) as usize
    };
    let mut stack = Vec::new();
    for r1 in 1..=n1 {
        for r2 in 1..=n2 {
            for r3 in 1..=n3 {
                let r = [r1, r2, r3];
                if visited[idx(r)] {
                    continue;
                }
                let label = sigma.get(r);
                *parts.entry(label).or_insert(0) += 1;
                stack.push(r);
                visited[idx(r)] = true;
                while let Some(v) = stack.pop() {
                    for a in 0..3 {
                        for s in [-1i64, 1] {
                            let mut w = v;
                            let c = v[a] as i64 + s;
                            if c < 1 {
                                continue;
                            }
                            w[a] = c as u32;
                            if !shape.contains_voxel(w) || visited[idx(w)] {
                                continue;
                            }
                            if sigma.get(w) == label {
                                visited[idx(w)] = true;
                                stack.push(w);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut bad: Vec<(u32, u32)> = parts.into_iter().filter(|&(_, n)| n > 1).collect();
    bad.sort_unstable();
    bad
}
