//! Brute-force reference implementations used as test oracles.
//!
//! Everything here is written from the definitions and shares no code with
//! the library: distances go through 3-D chord length, leximax is decided by
//! counting grades level by level, and ranks come from pairwise comparison.
#![allow(dead_code)]

pub mod gen;

use std::cmp::Ordering;

use conflict_zones::{Owner, Resource, World};

pub const R_KM: f64 = 6371.0;

fn unit(lat: f64, lon: f64) -> [f64; 3] {
    let (la, lo) = (lat.to_radians(), lon.to_radians());
    [la.cos() * lo.cos(), la.cos() * lo.sin(), la.sin()]
}

/// Great-circle distance from the straight-line chord between the points.
pub fn chord_distance_km(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (p, q) = (unit(a.0, a.1), unit(b.0, b.1));
    let chord = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
    2.0 * R_KM * (chord / 2.0).min(1.0).asin()
}

/// `Greater` when `x` is more intense: walking down from the top grade, the
/// first level where the two vectors hold different counts decides.
pub fn leximax_by_counts(x: &[u8], y: &[u8]) -> Ordering {
    assert_eq!(x.len(), y.len());
    let top = x.iter().chain(y).copied().max().unwrap_or(0);
    for level in (0..=top).rev() {
        let cx = x.iter().filter(|&&g| g == level).count();
        let cy = y.iter().filter(|&&g| g == level).count();
        if cx != cy {
            return cx.cmp(&cy);
        }
    }
    Ordering::Equal
}

/// For each cell: how many cells are strictly weaker and how many tie with it
/// (itself included).
pub fn pairwise_positions(vectors: &[Vec<u8>]) -> Vec<(usize, usize)> {
    vectors
        .iter()
        .map(|v| {
            let mut below = 0;
            let mut ties = 0;
            for w in vectors {
                match leximax_by_counts(v, w) {
                    Ordering::Greater => below += 1,
                    Ordering::Equal => ties += 1,
                    Ordering::Less => {}
                }
            }
            (below, ties)
        })
        .collect()
}

/// Percentile classes: zero vectors get 0, the rest are cut into `n - 1`
/// bins by the midpoint of their rank range among nonzero cells.
pub fn percentile_classes(vectors: &[Vec<u8>], n: usize) -> Vec<u8> {
    let nonzero: Vec<bool> = vectors.iter().map(|v| v.iter().any(|&g| g > 0)).collect();
    let population = nonzero.iter().filter(|&&b| b).count();
    vectors
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if !nonzero[i] {
                return 0;
            }
            let mut below = 0;
            let mut ties = 0;
            for (j, w) in vectors.iter().enumerate() {
                if !nonzero[j] {
                    continue;
                }
                match leximax_by_counts(v, w) {
                    Ordering::Greater => below += 1,
                    Ordering::Equal => ties += 1,
                    Ordering::Less => {}
                }
            }
            // Midpoint percentile (below + ties/2) / population, cut into n-1 bins.
            let bins = n - 1;
            let bin = (bins * (2 * below + ties)) / (2 * population);
            1 + bin.min(bins - 1) as u8
        })
        .collect()
}

pub fn linear_grades(u: &[f64], n: usize, w: f64) -> Vec<u8> {
    let max = u.iter().copied().fold(0.0_f64, f64::max);
    u.iter()
        .map(|&x| {
            if x <= 0.0 {
                0
            } else {
                let g = (n as f64 * w * x / (max * (1.0 + 1e-9))).floor() as usize;
                g.min(n - 1) as u8
            }
        })
        .collect()
}

/// Sort the positive values, cut the sorted list into `n - 1` equal slices
/// and give every run of equal values the slice holding its middle.
pub fn sort_and_cut_grades(u: &[f64], n: usize) -> Vec<u8> {
    let mut sorted: Vec<f64> = u.iter().copied().filter(|&x| x > 0.0).collect();
    sorted.sort_by(f64::total_cmp);
    let p = sorted.len();
    u.iter()
        .map(|&x| {
            if x <= 0.0 {
                return 0;
            }
            let first = sorted.iter().position(|&s| s == x).unwrap();
            let last = sorted.iter().rposition(|&s| s == x).unwrap() + 1;
            let bin = ((n - 1) * (first + last)) / (2 * p);
            1 + bin.min(n - 2) as u8
        })
        .collect()
}

/// Plain-data description of one scenario with a uniform alpha.
pub struct Scenario {
    pub alpha: f64,
    pub decay_km: f64,
    pub maritime_base: f64,
    /// Route importance per country, in declaration order.
    pub importance: Vec<f64>,
    pub grades: usize,
    pub step2_weights: [f64; 4],
}

pub struct PipelineOutput {
    /// `[country][cell]`
    pub distances: Vec<Vec<f64>>,
    /// `[resource][country][cell]`
    pub utilities: Vec<Vec<Vec<f64>>>,
    pub grades: Vec<Vec<Vec<u8>>>,
    /// `[resource][cell]`
    pub forecasts: Vec<Vec<u8>>,
    pub classes: Vec<u8>,
}

/// Runs every stage from the definitions: exhaustive-min distances, direct
/// utility formulas, linear grading and percentile classes from pairwise
/// comparison. `layers` follow [`Resource::ALL`].
pub fn pipeline(world: &World, layers: &[Vec<f64>; 4], s: &Scenario) -> PipelineOutput {
    let cells = world.len();
    let centers: Vec<(f64, f64)> = world
        .grid()
        .centers()
        .iter()
        .map(|c| (c.lat, c.lon))
        .collect();
    let owner: Vec<Option<usize>> = world
        .ownership()
        .iter()
        .map(|o| match o {
            Owner::Owned(code) => world.countries().iter().position(|c| &c.code == code),
            Owner::International => None,
        })
        .collect();

    let mut distances = Vec::new();
    for (k, c) in world.countries().iter().enumerate() {
        let mut sources: Vec<(f64, f64)> = (0..cells)
            .filter(|&i| owner[i] == Some(k))
            .map(|i| centers[i])
            .collect();
        if sources.is_empty() {
            let a = c.anchor.expect("anchor for a country without cells");
            sources.push((a.lat, a.lon));
        }
        let d: Vec<f64> = (0..cells)
            .map(|i| {
                if owner[i] == Some(k) {
                    0.0
                } else {
                    let mut best = f64::INFINITY;
                    for &src in &sources {
                        let x = chord_distance_km(centers[i], src);
                        if x < best {
                            best = x;
                        }
                    }
                    best
                }
            })
            .collect();
        distances.push(d);
    }

    let mut utilities = Vec::new();
    for (ri, r) in Resource::ALL.iter().enumerate() {
        let mut per_country = Vec::new();
        for (k, c) in world.countries().iter().enumerate() {
            let u: Vec<f64> = (0..cells)
                .map(|i| {
                    let own = owner[i] == Some(k);
                    let foreign = owner[i].is_some() && !own;
                    let d = distances[k][i];
                    let decay = 1.0 + d / s.decay_km;
                    let m = if foreign { s.alpha } else { 1.0 };
                    if *r != Resource::Maritime {
                        return m * layers[ri][i] / decay;
                    }
                    if layers[ri][i] <= 0.0 {
                        0.0
                    } else if c.is_arctic() {
                        if own {
                            s.maritime_base
                        } else {
                            m * s.maritime_base / decay
                        }
                    } else {
                        let m = if owner[i].is_some() { s.alpha } else { 1.0 };
                        m * s.maritime_base * s.importance[k]
                    }
                })
                .collect();
            per_country.push(u);
        }
        utilities.push(per_country);
    }

    let grades: Vec<Vec<Vec<u8>>> = utilities
        .iter()
        .map(|per_country| {
            per_country
                .iter()
                .map(|u| linear_grades(u, s.grades, 1.0))
                .collect()
        })
        .collect();

    let forecasts: Vec<Vec<u8>> = grades
        .iter()
        .map(|per_country| {
            let vectors: Vec<Vec<u8>> = (0..cells)
                .map(|i| per_country.iter().map(|g| g[i]).collect())
                .collect();
            percentile_classes(&vectors, s.grades)
        })
        .collect();

    let top = (s.grades - 1) as f64;
    let overall: Vec<Vec<u8>> = (0..cells)
        .map(|i| {
            (0..4)
                .map(|r| {
                    (forecasts[r][i] as f64 * s.step2_weights[r] + 0.5)
                        .floor()
                        .min(top) as u8
                })
                .collect()
        })
        .collect();
    let classes = percentile_classes(&overall, s.grades);

    PipelineOutput {
        distances,
        utilities,
        grades,
        forecasts,
        classes,
    }
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}
