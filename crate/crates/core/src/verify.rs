//! Equivalence checking between labelings, used as the correctness oracle
//! for block-wise extraction.
//!
//! Two labelings of the same grid are isomorphic when zeros coincide and
//! equal labels in one map correspond exactly to equal labels in the other.
//! Labels live in independent namespaces per cell order, so the check runs
//! order by order.

use std::collections::HashMap;
use std::path::Path;

use crate::blockwise::{self, BlockSpec, PipelineOptions};
use crate::error::{Error, Result};
use crate::labeling::{self, Extraction, SegmentLabelMap, TopologicalLabelMap};
use crate::source::InMemorySource;
use crate::store::GridReader;
use crate::topogrid::{CellCoord, CellOrder};

/// Outcome of an isomorphism check.
#[derive(Debug, Clone)]
pub struct IsomorphismReport {
    pub isomorphic: bool,
    /// First violating cell pair. For a zero-pattern mismatch both entries
    /// name the same cell; for a label-correspondence conflict the second
    /// entry is the cell that established the conflicting mapping.
    pub witness: Option<(CellCoord, CellCoord)>,
    /// Distinct non-zero label counts per cell order, `(left, right)`,
    /// indexed by order.
    pub counts: [(u32, u32); 4],
}

impl IsomorphismReport {
    pub fn counts_for(&self, order: CellOrder) -> (u32, u32) {
        self.counts[order.index() as usize]
    }
}

/// Checks that `a` and `b` are isomorphic, optionally restricted to cells of
/// one order. Runs in one linear pass per map by maintaining the label
/// correspondence in both directions.
pub fn check_isomorphic(
    a: &TopologicalLabelMap,
    b: &TopologicalLabelMap,
    order: Option<CellOrder>,
) -> Result<IsomorphismReport> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(
            "isomorphism check requires equal grid shapes".into(),
        ));
    }
    // Per order: forward and backward label maps, plus the cell that first
    // established each forward entry so conflicts can name a witness pair.
    let mut fwd: [HashMap<u32, (u32, CellCoord)>; 4] = Default::default();
    let mut bwd: [HashMap<u32, (u32, CellCoord)>; 4] = Default::default();

    let mut witness = None;
    a.for_each_cell(|t| {
        if witness.is_some() {
            return;
        }
        let j = t.order();
        if order.is_some() && order != Some(j) {
            return;
        }
        let la = a.get(t);
        let lb = b.get(t);
        if (la == 0) != (lb == 0) {
            witness = Some((t, t));
            return;
        }
        if la == 0 {
            return;
        }
        let slot = j.index() as usize;
        match fwd[slot].get(&la) {
            Some(&(mapped, at)) if mapped != lb => {
                witness = Some((t, at));
                return;
            }
            None => {
                fwd[slot].insert(la, (lb, t));
            }
            _ => {}
        }
        match bwd[slot].get(&lb) {
            Some(&(mapped, at)) if mapped != la => {
                witness = Some((t, at));
            }
            None => {
                bwd[slot].insert(lb, (la, t));
            }
            _ => {}
        }
    });

    let mut counts = [(0u32, 0u32); 4];
    for j in 0..4 {
        counts[j] = (fwd[j].len() as u32, bwd[j].len() as u32);
    }
    Ok(IsomorphismReport {
        isomorphic: witness.is_none(),
        witness,
        counts,
    })
}

/// Runs whole-volume labeling and the block-wise pipeline on the same input
/// and compares the results. Intended for volumes small enough to label in
/// memory; the block store is written to a temporary directory.
pub fn verify_pipeline(sigma: &SegmentLabelMap, spec: &BlockSpec) -> Result<IsomorphismReport> {
    verify_pipeline_opts(sigma, spec, &PipelineOptions::default())
}

pub fn verify_pipeline_opts(
    sigma: &SegmentLabelMap,
    spec: &BlockSpec,
    opts: &PipelineOptions,
) -> Result<IsomorphismReport> {
    let oracle = labeling::extract_full(sigma)?;
    let dir = tempdir()?;
    let root = dir.path.join("grid");
    let source = InMemorySource::new(sigma);
    blockwise::extract_blockwise(&source, spec, &root, opts)?;
    let reader = GridReader::open(&root)?;
    let materialized = blockwise::materialize(&reader)?;
    check_isomorphic(&oracle.tau, &materialized, None)
}

/// Runs the pipeline plus geometry output and checks every store read
/// against the in-memory labeling: per-cell label queries, per-component
/// coordinate lists, and the corner-point table.
pub fn verify_store(sigma: &SegmentLabelMap, spec: &BlockSpec) -> Result<bool> {
    let dir = tempdir()?;
    let grid_root = dir.path.join("grid");
    let geom_root = dir.path.join("geom");
    let source = InMemorySource::new(sigma);
    blockwise::extract_blockwise(&source, spec, &grid_root, &PipelineOptions::default())?;
    let reader = GridReader::open(&grid_root)?;
    let geom = crate::store::write_geometry(&reader, &geom_root, 64)?;
    let tau = blockwise::materialize(&reader)?;

    // Every cell query must agree with the materialized labeling.
    let mut ok = true;
    tau.for_each_cell(|t| {
        if !ok {
            return;
        }
        match reader.query_label(t) {
            Ok((order, label)) => {
                if order != t.order() || label != tau.get(t) {
                    ok = false;
                }
            }
            Err(_) => ok = false,
        }
    });
    if !ok {
        return Ok(false);
    }

    // Component coordinate lists must match the cell sets per label.
    let mut expected: HashMap<(u8, u32), Vec<CellCoord>> = HashMap::new();
    tau.for_each_cell(|t| {
        let l = tau.get(t);
        if l != 0 {
            expected.entry((t.order().index(), l)).or_default().push(t);
        }
    });
    let geom_reader = crate::store::GeometryReader::open(geom.root())?;
    for order in [CellOrder::Edge, CellOrder::Face, CellOrder::Voxel] {
        let max = geom_reader.max_label(order);
        let mut labels_seen = 0u32;
        for q in 1..=max {
            let mut coords = geom_reader.read_component(order, q)?;
            coords.sort_unstable();
            let mut want = expected
                .remove(&(order.index(), q))
                .unwrap_or_default();
            want.sort_unstable();
            if coords != want {
                return Ok(false);
            }
            if !coords.is_empty() {
                labels_seen += 1;
            }
        }
        let _ = labels_seen;
    }
    // Corner points: the 0-cell table holds exactly the active corners.
    let mut points = geom_reader.zero_cells()?;
    points.sort_unstable();
    let mut want: Vec<CellCoord> = expected
        .iter()
        .filter(|((j, _), _)| *j == 0)
        .flat_map(|(_, v)| v.iter().copied())
        .collect();
    want.sort_unstable();
    if points != want {
        return Ok(false);
    }
    // Everything of order 1..=3 must have been consumed.
    Ok(expected.keys().all(|(j, _)| *j == 0))
}

/// Re-evaluates the labeling definition cell by cell: a non-voxel cell is
/// labeled iff its recomputed signature is active, and the component table
/// row equals that signature. Returns the first offending cell.
pub fn audit_definition(out: &Extraction) -> std::result::Result<(), CellCoord> {
    let mut bad = None;
    out.tau.for_each_cell(|t| {
        if bad.is_some() || t.order() == CellOrder::Voxel {
            return;
        }
        let sig = labeling::signature(t, &out.tau);
        let label = out.tau.get(t);
        if (label != 0) != sig.is_active() {
            bad = Some(t);
            return;
        }
        if label != 0 && out.table(t.order()).row(label) != sig.as_slice() {
            bad = Some(t);
        }
    });
    match bad {
        None => Ok(()),
        Some(t) => Err(t),
    }
}

/// Minimal scoped temporary directory so the library has no test-only
/// dependency at runtime.
struct TempDir {
    path: std::path::PathBuf,
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.path);
    }
}

fn tempdir() -> Result<TempDir> {
    use std::time::{SystemTime, UNIX_EPOCH};
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .unwrap_or_default()
        .as_nanos();
    let pid = std::process::id();
    for attempt in 0..64u32 {
        let path = std::env::temp_dir().join(format!("segtopo-{pid}-{nanos}-{attempt}"));
        match std::fs::create_dir(&path) {
            Ok(()) => return Ok(TempDir { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(Error::io(path, e)),
        }
    }
    Err(Error::io(
        std::env::temp_dir(),
        std::io::Error::new(std::io::ErrorKind::AlreadyExists, "no free temp dir name"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identical_maps_are_isomorphic() {
        let out = labeling::extract_full(&fixtures::sample_3x3x2()).unwrap();
        let report = check_isomorphic(&out.tau, &out.tau, None).unwrap();
        assert!(report.isomorphic);
        assert_eq!(report.counts_for(CellOrder::Face), (7, 7));
        assert_eq!(report.counts_for(CellOrder::Edge), (2, 2));
        assert_eq!(report.counts_for(CellOrder::Corner), (0, 0));
        assert_eq!(report.counts_for(CellOrder::Voxel), (6, 6));
    }

    #[test]
    fn label_bijections_preserve_isomorphism() {
        let out = labeling::extract_full(&fixtures::sample_3x3x2()).unwrap();
        let mut permuted = out.tau.clone();
        let shape = *permuted.shape();
        let _ = shape;
        // Apply an order-wise bijection: l -> 2l + 5 on faces, reverse on
        // curves.
        let curve_count = out.curve_count;
        out.tau.for_each_cell(|t| {
            let l = out.tau.get(t);
            if l == 0 {
                return;
            }
            match t.order() {
                CellOrder::Face => permuted.set(t, 2 * l + 5),
                CellOrder::Edge => permuted.set(t, curve_count + 1 - l),
                _ => {}
            }
        });
        let report = check_isomorphic(&out.tau, &permuted, None).unwrap();
        assert!(report.isomorphic);
    }

    #[test]
    fn detects_zero_pattern_mismatch() {
        let out = labeling::extract_full(&fixtures::sample_3x3x2()).unwrap();
        let mut broken = out.tau.clone();
        broken.set(CellCoord::new(2, 2, 1), 1); // an inactive edge
        let report = check_isomorphic(&out.tau, &broken, None).unwrap();
        assert!(!report.isomorphic);
        assert_eq!(report.witness.unwrap().0, CellCoord::new(2, 2, 1));
    }

    #[test]
    fn detects_merged_labels() {
        let out = labeling::extract_full(&fixtures::sample_3x3x2()).unwrap();
        let mut broken = out.tau.clone();
        // Merge face 2 into face 1.
        out.tau.for_each_cell(|t| {
            if t.order() == CellOrder::Face && out.tau.get(t) == 2 {
                broken.set(t, 1);
            }
        });
        let report = check_isomorphic(&out.tau, &broken, None).unwrap();
        assert!(!report.isomorphic);
        assert!(report.witness.is_some());
    }

    #[test]
    fn one_pass_check_matches_quadratic_definition() {
        // The pairwise definition on all cell pairs must agree with the
        // linear bidirectional-map implementation.
        for seed in 0..12u64 {
            let a = labeling::extract_full(&fixtures::random_labels([3, 3, 2], 3, seed))
                .unwrap()
                .tau;
            let b = labeling::extract_full(&fixtures::random_labels([3, 3, 2], 3, seed + 100))
                .unwrap()
                .tau;
            for (x, y) in [(&a, &a), (&a, &b)] {
                let fast = check_isomorphic(x, y, None).unwrap().isomorphic;
                let slow = quadratic_isomorphic(x, y);
                assert_eq!(fast, slow, "seed {seed}");
            }
        }
    }

    fn quadratic_isomorphic(a: &TopologicalLabelMap, b: &TopologicalLabelMap) -> bool {
        let mut cells = Vec::new();
        a.for_each_cell(|t| cells.push(t));
        for &u in &cells {
            if (a.get(u) == 0) != (b.get(u) == 0) {
                return false;
            }
            for &v in &cells {
                if u.order() != v.order() {
                    continue;
                }
                if a.get(u) == 0 || a.get(v) == 0 {
                    continue;
                }
                if (a.get(u) == a.get(v)) != (b.get(u) == b.get(v)) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn transitivity_spot_check() {
        let base = labeling::extract_full(&fixtures::sample_3x3x2()).unwrap().tau;
        let mut b = base.clone();
        let mut c = base.clone();
        base.for_each_cell(|t| {
            let l = base.get(t);
            if l != 0 && t.order() == CellOrder::Face {
                b.set(t, l + 10);
                c.set(t, l * 3);
            }
        });
        let ab = check_isomorphic(&base, &b, None).unwrap().isomorphic;
        let bc = check_isomorphic(&b, &c, None).unwrap().isomorphic;
        let ac = check_isomorphic(&base, &c, None).unwrap().isomorphic;
        assert!(ab && bc && ac);
    }
}
