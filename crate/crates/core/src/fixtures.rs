//! Deterministic example volumes for tests, documentation and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::labeling::SegmentLabelMap;
use crate::topogrid::GridShape;

/// The 3 x 3 x 2 sample volume used throughout the tests: six segments whose
/// labeling yields 7 faces, 2 curves and no active corner points.
///
/// ```text
/// z = 1        z = 2
/// 1 1 1        4 4 4
/// 1 2 1        4 5 4
/// 1 1 3        4 4 6
/// ```
pub fn sample_3x3x2() -> SegmentLabelMap {
    let shape = GridShape::new(3, 3, 2).unwrap();
    #[rustfmt::skip]
    let labels = vec![
        1, 4,  1, 4,  1, 4,
        1, 4,  2, 5,  1, 4,
        1, 4,  1, 4,  3, 6,
    ];
    SegmentLabelMap::new(shape, labels).unwrap()
}

/// Independent uniform labels in `1..=segments` per voxel. Pathological by
/// design; useful for small randomized correctness tests.
pub fn random_labels(extents: [u32; 3], segments: u32, seed: u64) -> SegmentLabelMap {
    assert!(segments >= 1);
    let shape = GridShape::new(extents[0], extents[1], extents[2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..shape.voxel_count())
        .map(|_| rng.gen_range(1..=segments))
        .collect();
    SegmentLabelMap::new(shape, labels).unwrap()
}

/// A segmentation with `segments` compact regions: each voxel takes the
/// label of its nearest randomly placed center.
pub fn voronoi_volume(extents: [u32; 3], segments: u32, seed: u64) -> SegmentLabelMap {
    assert!(segments >= 1);
    let shape = GridShape::new(extents[0], extents[1], extents[2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<[i64; 3]> = (0..segments)
        .map(|_| {
            [
                rng.gen_range(1..=extents[0]) as i64,
                rng.gen_range(1..=extents[1]) as i64,
                rng.gen_range(1..=extents[2]) as i64,
            ]
        })
        .collect();
    let mut labels = Vec::with_capacity(shape.voxel_count());
    for r1 in 1..=extents[0] {
        for r2 in 1..=extents[1] {
            for r3 in 1..=extents[2] {
                let mut best = 0usize;
                let mut best_d = i64::MAX;
                for (i, c) in centers.iter().enumerate() {
                    let d = (c[0] - r1 as i64).pow(2)
                        + (c[1] - r2 as i64).pow(2)
                        + (c[2] - r3 as i64).pow(2);
                    if d < best_d {
                        best_d = d;
                        best = i;
                    }
                }
                labels.push(best as u32 + 1);
            }
        }
    }
    SegmentLabelMap::new(shape, labels).unwrap()
}

/// A segmentation of jittered axis-aligned bricks of roughly `brick` voxels
/// per side. Cheap to generate at any scale, with boundary structure
/// everywhere; used for the large scaling runs.
pub fn brick_volume(extents: [u32; 3], brick: u32, seed: u64) -> SegmentLabelMap {
    assert!(brick >= 1);
    let shape = GridShape::new(extents[0], extents[1], extents[2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Per-axis jitter of the brick boundaries keeps faces irregular.
    let cuts = |n: u32| -> Vec<u32> {
        let mut cut = Vec::new();
        let mut at = brick;
        while at < n {
            let j = rng.gen_range(0..=2u32);
            cut.push((at + j).min(n));
            at += brick;
        }
        cut
    };
    let cell_of = |cuts: &[u32], v: u32| -> u32 {
        cuts.iter().take_while(|&&c| c < v).count() as u32
    };
    let c1 = cuts(extents[0]);
    let c2 = cuts(extents[1]);
    let c3 = cuts(extents[2]);
    let s2 = c2.len() as u32 + 1;
    let s3 = c3.len() as u32 + 1;
    let mut labels = Vec::with_capacity(shape.voxel_count());
    for r1 in 1..=extents[0] {
        for r2 in 1..=extents[1] {
            for r3 in 1..=extents[2] {
                let b = (cell_of(&c1, r1) * s2 + cell_of(&c2, r2)) * s3 + cell_of(&c3, r3);
                labels.push(b + 1);
            }
        }
    }
    SegmentLabelMap::new(shape, labels).unwrap()
}
