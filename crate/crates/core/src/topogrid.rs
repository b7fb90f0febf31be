//! The voxel grid, the topological grid, and the relations between cells.
//!
//! A volume of `n1 x n2 x n3` voxels is embedded in a topological grid of
//! `(2*n1-1) x (2*n2-1) x (2*n3-1)` cells. A cell with `j` odd coordinates is
//! a j-cell: 3-cells are voxels, 2-cells the faces between voxels, 1-cells
//! the edges between faces and 0-cells the corners between edges. All
//! coordinates are 1-based.

use crate::error::{Error, Result};

/// Voxel extents of a volume. Each axis must hold at least one voxel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridShape {
    n1: u32,
    n2: u32,
    n3: u32,
}

impl GridShape {
    pub fn new(n1: u32, n2: u32, n3: u32) -> Result<Self> {
        if n1 == 0 || n2 == 0 || n3 == 0 {
            return Err(Error::ShapeMismatch(format!(
                "voxel extents must be positive, got {n1} x {n2} x {n3}"
            )));
        }
        Ok(GridShape { n1, n2, n3 })
    }

    pub fn voxel_extents(&self) -> [u32; 3] {
        [self.n1, self.n2, self.n3]
    }

    /// Extents of the topological grid, `2*n - 1` per axis.
    pub fn topo_extents(&self) -> [u32; 3] {
        [2 * self.n1 - 1, 2 * self.n2 - 1, 2 * self.n3 - 1]
    }

    pub fn voxel_count(&self) -> usize {
        self.n1 as usize * self.n2 as usize * self.n3 as usize
    }

    pub fn cell_count(&self) -> usize {
        let [d1, d2, d3] = self.topo_extents();
        d1 as usize * d2 as usize * d3 as usize
    }

    pub fn contains_voxel(&self, r: [u32; 3]) -> bool {
        let [n1, n2, n3] = self.voxel_extents();
        (1..=n1).contains(&r[0]) && (1..=n2).contains(&r[1]) && (1..=n3).contains(&r[2])
    }

    pub fn contains_cell(&self, t: CellCoord) -> bool {
        let [d1, d2, d3] = self.topo_extents();
        (1..=d1).contains(&t.t1) && (1..=d2).contains(&t.t2) && (1..=d3).contains(&t.t3)
    }

    pub fn check_cell(&self, t: CellCoord) -> Result<()> {
        if self.contains_cell(t) {
            Ok(())
        } else {
            Err(Error::OutOfBounds(t.t1, t.t2, t.t3))
        }
    }
}

/// A 1-based coordinate on the topological grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellCoord {
    pub t1: u32,
    pub t2: u32,
    pub t3: u32,
}

impl CellCoord {
    pub fn new(t1: u32, t2: u32, t3: u32) -> Self {
        CellCoord { t1, t2, t3 }
    }

    pub fn axes(&self) -> [u32; 3] {
        [self.t1, self.t2, self.t3]
    }

    pub fn axis(&self, i: usize) -> u32 {
        match i {
            0 => self.t1,
            1 => self.t2,
            _ => self.t3,
        }
    }

    fn with_axis(mut self, i: usize, v: u32) -> Self {
        match i {
            0 => self.t1 = v,
            1 => self.t2 = v,
            _ => self.t3 = v,
        }
        self
    }

    /// Number of odd coordinates; determines what the cell represents.
    pub fn order(&self) -> CellOrder {
        let j = (self.t1 & 1) + (self.t2 & 1) + (self.t3 & 1);
        CellOrder::from_index(j as u8)
    }
}

/// The order of a cell: how many of its coordinates are odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellOrder {
    /// 0-cell, a corner point between edges.
    Corner,
    /// 1-cell, an edge between faces.
    Edge,
    /// 2-cell, a face between voxels.
    Face,
    /// 3-cell, a voxel.
    Voxel,
}

impl CellOrder {
    pub fn from_index(j: u8) -> CellOrder {
        match j {
            0 => CellOrder::Corner,
            1 => CellOrder::Edge,
            2 => CellOrder::Face,
            3 => CellOrder::Voxel,
            _ => unreachable!("cell order must be in 0..=3"),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            CellOrder::Corner => 0,
            CellOrder::Edge => 1,
            CellOrder::Face => 2,
            CellOrder::Voxel => 3,
        }
    }

    /// Width of the neighborhood of a cell of this order: 6, 4, 2 or 0.
    pub fn neighbor_count(self) -> usize {
        6 - 2 * self.index() as usize
    }
}

/// Up to six neighbor coordinates, in canonical axis order.
#[derive(Debug, Clone, Copy)]
pub struct Neighbors {
    cells: [CellCoord; 6],
    len: usize,
}

impl Neighbors {
    fn new() -> Self {
        Neighbors {
            cells: [CellCoord::new(0, 0, 0); 6],
            len: 0,
        }
    }

    fn push(&mut self, c: CellCoord) {
        self.cells[self.len] = c;
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_slice(&self) -> &[CellCoord] {
        &self.cells[..self.len]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CellCoord> {
        self.as_slice().iter()
    }
}

/// Returns the count of odd entries of `t`, after checking bounds.
pub fn cell_order(t: CellCoord, shape: &GridShape) -> Result<CellOrder> {
    shape.check_cell(t)?;
    Ok(t.order())
}

/// Maps a voxel coordinate to its 3-cell on the topological grid, `2r - 1`.
pub fn voxel_to_cell(r: [u32; 3], shape: &GridShape) -> Result<CellCoord> {
    if !shape.contains_voxel(r) {
        return Err(Error::OutOfBounds(r[0], r[1], r[2]));
    }
    Ok(CellCoord::new(2 * r[0] - 1, 2 * r[1] - 1, 2 * r[2] - 1))
}

/// The neighborhood of a j-cell: its 6-neighbors of order j+1. These are the
/// cells at distance one along each even axis, emitted in canonical order
/// (axis 1 minus, axis 1 plus, axis 2 minus, axis 2 plus, axis 3 minus,
/// axis 3 plus). Even coordinates are never on the grid boundary, so the
/// result always holds exactly `6 - 2j` cells.
pub fn gamma(t: CellCoord, shape: &GridShape) -> Result<Neighbors> {
    shape.check_cell(t)?;
    Ok(gamma_unchecked(t))
}

pub(crate) fn gamma_unchecked(t: CellCoord) -> Neighbors {
    let mut out = Neighbors::new();
    for i in 0..3 {
        let v = t.axis(i);
        if v % 2 == 0 {
            out.push(t.with_axis(i, v - 1));
            out.push(t.with_axis(i, v + 1));
        }
    }
    out
}

/// Whether `u` and `v` are both neighbors of some common cell. Cells of
/// different orders, identical cells and 0-cells are never connected.
pub fn connected(u: CellCoord, v: CellCoord, shape: &GridShape) -> Result<bool> {
    shape.check_cell(u)?;
    shape.check_cell(v)?;
    if u == v || u.order() != v.order() {
        return Ok(false);
    }
    let mut found = false;
    for_each_connected(u, shape, |w| {
        if w == v {
            found = true;
        }
    });
    Ok(found)
}

/// Visits every cell connected to `u`: the other members of the neighborhood
/// of each cell one order below `u` that has `u` as a neighbor. All visited
/// cells have the order of `u`; no cell is visited twice.
pub(crate) fn for_each_connected(u: CellCoord, shape: &GridShape, mut f: impl FnMut(CellCoord)) {
    let [d1, d2, d3] = shape.topo_extents();
    let dims = [d1, d2, d3];
    for a in 0..3 {
        let va = u.axis(a);
        if va % 2 == 0 {
            continue;
        }
        for sa in [-1i64, 1] {
            let ta = va as i64 + sa;
            if ta < 1 || ta > dims[a] as i64 {
                continue;
            }
            let t = u.with_axis(a, ta as u32);
            // All even axes of t stay interior, so every step below is in
            // bounds. Continuing along axis a reaches the cell two steps
            // from u; the other even axes give the diagonal moves.
            f(t.with_axis(a, (ta + sa) as u32));
            for b in 0..3 {
                if b == a || u.axis(b) % 2 == 1 {
                    continue;
                }
                f(t.with_axis(b, t.axis(b) - 1));
                f(t.with_axis(b, t.axis(b) + 1));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n1: u32, n2: u32, n3: u32) -> GridShape {
        GridShape::new(n1, n2, n3).unwrap()
    }

    #[test]
    fn orders_count_odd_entries() {
        let s = shape(3, 3, 3);
        assert_eq!(cell_order(CellCoord::new(1, 1, 1), &s).unwrap(), CellOrder::Voxel);
        assert_eq!(cell_order(CellCoord::new(2, 3, 5), &s).unwrap(), CellOrder::Face);
        assert_eq!(cell_order(CellCoord::new(2, 2, 2), &s).unwrap(), CellOrder::Corner);
        assert_eq!(cell_order(CellCoord::new(2, 2, 1), &s).unwrap(), CellOrder::Edge);
        assert!(cell_order(CellCoord::new(6, 1, 1), &s).is_err());
    }

    #[test]
    fn voxel_to_cell_doubles_minus_one() {
        let s = shape(3, 3, 2);
        assert_eq!(
            voxel_to_cell([1, 1, 1], &s).unwrap(),
            CellCoord::new(1, 1, 1)
        );
        assert_eq!(
            voxel_to_cell([2, 3, 1], &s).unwrap(),
            CellCoord::new(3, 5, 1)
        );
        assert_eq!(
            voxel_to_cell([3, 3, 2], &s).unwrap(),
            CellCoord::new(5, 5, 3)
        );
        assert!(voxel_to_cell([4, 1, 1], &s).is_err());
    }

    #[test]
    fn voxel_to_cell_is_a_bijection_onto_3cells() {
        let s = shape(3, 2, 4);
        let mut seen = std::collections::HashSet::new();
        let [n1, n2, n3] = s.voxel_extents();
        for r1 in 1..=n1 {
            for r2 in 1..=n2 {
                for r3 in 1..=n3 {
                    let t = voxel_to_cell([r1, r2, r3], &s).unwrap();
                    assert_eq!(t.order(), CellOrder::Voxel);
                    assert!(seen.insert(t));
                }
            }
        }
        // Every 3-cell is hit.
        let [d1, d2, d3] = s.topo_extents();
        let mut threes = 0;
        for t1 in 1..=d1 {
            for t2 in 1..=d2 {
                for t3 in 1..=d3 {
                    if CellCoord::new(t1, t2, t3).order() == CellOrder::Voxel {
                        threes += 1;
                    }
                }
            }
        }
        assert_eq!(seen.len(), threes);
        assert_eq!(seen.len(), s.voxel_count());
    }

    #[test]
    fn gamma_of_a_face_is_its_two_voxels() {
        let s = shape(2, 2, 2);
        let n = gamma(CellCoord::new(2, 1, 1), &s).unwrap();
        assert_eq!(
            n.as_slice(),
            &[CellCoord::new(1, 1, 1), CellCoord::new(3, 1, 1)]
        );
    }

    #[test]
    fn gamma_of_a_voxel_is_empty() {
        let s = shape(2, 2, 2);
        assert!(gamma(CellCoord::new(1, 1, 1), &s).unwrap().is_empty());
    }

    #[test]
    fn gamma_of_center_corner_is_six_edges() {
        let s = shape(2, 2, 2);
        let n = gamma(CellCoord::new(2, 2, 2), &s).unwrap();
        assert_eq!(n.len(), 6);
        for c in n.iter() {
            assert_eq!(c.order(), CellOrder::Edge);
        }
        // Canonical order: axis 1 -, axis 1 +, axis 2 -, axis 2 +, ...
        assert_eq!(
            n.as_slice(),
            &[
                CellCoord::new(1, 2, 2),
                CellCoord::new(3, 2, 2),
                CellCoord::new(2, 1, 2),
                CellCoord::new(2, 3, 2),
                CellCoord::new(2, 2, 1),
                CellCoord::new(2, 2, 3),
            ]
        );
    }

    #[test]
    fn gamma_size_matches_order_everywhere() {
        // Exhaustive over grids up to 4x4x4 voxels: |gamma| = 6 - 2j and all
        // neighbors are in the grid with order j + 1.
        for n1 in 1..=4u32 {
            for n2 in 1..=4u32 {
                for n3 in 1..=4u32 {
                    let s = shape(n1, n2, n3);
                    let [d1, d2, d3] = s.topo_extents();
                    for t1 in 1..=d1 {
                        for t2 in 1..=d2 {
                            for t3 in 1..=d3 {
                                let t = CellCoord::new(t1, t2, t3);
                                let j = t.order().index() as usize;
                                let n = gamma(t, &s).unwrap();
                                let even_axes = t.axes().iter().filter(|v| *v % 2 == 0).count();
                                assert_eq!(n.len(), 2 * even_axes);
                                if j <= 2 {
                                    assert_eq!(n.len(), 6 - 2 * j);
                                } else {
                                    assert_eq!(n.len(), 0);
                                }
                                for c in n.iter() {
                                    assert!(s.contains_cell(*c));
                                    assert_eq!(c.order().index() as usize, j + 1);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn connectivity_examples() {
        let s = shape(3, 3, 2);
        // Two voxels sharing a face.
        assert!(connected(CellCoord::new(1, 1, 1), CellCoord::new(3, 1, 1), &s).unwrap());
        // Two faces sharing an edge.
        assert!(connected(CellCoord::new(2, 1, 1), CellCoord::new(2, 3, 1), &s).unwrap());
        // Corners are never connected.
        assert!(!connected(CellCoord::new(2, 2, 2), CellCoord::new(4, 2, 2), &s).unwrap());
        // Mixed orders are never connected.
        assert!(!connected(CellCoord::new(1, 1, 1), CellCoord::new(2, 1, 1), &s).unwrap());
    }

    #[test]
    fn connectivity_is_symmetric_and_irreflexive() {
        let s = shape(3, 2, 2);
        let [d1, d2, d3] = s.topo_extents();
        let mut cells = Vec::new();
        for t1 in 1..=d1 {
            for t2 in 1..=d2 {
                for t3 in 1..=d3 {
                    cells.push(CellCoord::new(t1, t2, t3));
                }
            }
        }
        for &u in &cells {
            assert!(!connected(u, u, &s).unwrap());
            for &v in &cells {
                let uv = connected(u, v, &s).unwrap();
                assert_eq!(uv, connected(v, u, &s).unwrap());
                if uv {
                    assert_eq!(u.order(), v.order());
                }
            }
        }
    }

    #[test]
    fn connected_matches_common_neighbor_definition() {
        // Brute-force the definition: u <-> v iff some cell t has both in its
        // neighborhood.
        let s = shape(2, 3, 2);
        let [d1, d2, d3] = s.topo_extents();
        let mut cells = Vec::new();
        for t1 in 1..=d1 {
            for t2 in 1..=d2 {
                for t3 in 1..=d3 {
                    cells.push(CellCoord::new(t1, t2, t3));
                }
            }
        }
        for &u in &cells {
            for &v in &cells {
                let mut expect = false;
                if u != v {
                    for &t in &cells {
                        let n = gamma(t, &s).unwrap();
                        if n.as_slice().contains(&u) && n.as_slice().contains(&v) {
                            expect = true;
                            break;
                        }
                    }
                }
                assert_eq!(connected(u, v, &s).unwrap(), expect, "u={u:?} v={v:?}");
            }
        }
    }

    #[test]
    fn for_each_connected_has_no_duplicates() {
        let s = shape(3, 3, 3);
        let [d1, d2, d3] = s.topo_extents();
        for t1 in 1..=d1 {
            for t2 in 1..=d2 {
                for t3 in 1..=d3 {
                    let u = CellCoord::new(t1, t2, t3);
                    let mut seen = std::collections::HashSet::new();
                    for_each_connected(u, &s, |v| {
                        assert!(seen.insert(v), "duplicate neighbor {v:?} of {u:?}");
                        assert_ne!(v, u);
                        assert!(s.contains_cell(v));
                    });
                }
            }
        }
    }
}
