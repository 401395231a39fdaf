//! Threshold aggregation of per-country grades.
//!
//! Each cell carries one grade per country. The grades are sorted in
//! nonincreasing order and cells are compared lexicographically on the
//! sorted vectors, so the largest grade decides first (leximax). The
//! resulting total preorder is cut into intensity classes, either by rank
//! percentile or by explicit reference vectors.
//!
//! The full procedure runs twice: once per resource across countries,
//! producing a per-resource forecast on the grade scale, then across the
//! four forecasts to get the overall intensity class.

use std::cmp::Ordering;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::utility::GradeField;

/// Grades of all countries at one cell, in country order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradeVector(pub Vec<u8>);

/// Grades in nonincreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SortedGradeVector(Vec<u8>);

impl SortedGradeVector {
    /// Fails unless `grades` is already nonincreasing.
    pub fn new(grades: Vec<u8>) -> Result<Self> {
        if grades.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidScheme(format!(
                "vector {grades:?} is not in nonincreasing order"
            )));
        }
        Ok(Self(grades))
    }

    pub fn grades(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&g| g == 0)
    }
}

impl Ord for SortedGradeVector {
    fn cmp(&self, other: &Self) -> Ordering {
        lex(&self.0, &other.0).then(self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for SortedGradeVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn lex(a: &[u8], b: &[u8]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x.cmp(y);
        }
    }
    Ordering::Equal
}

pub fn sort_desc(v: &GradeVector) -> SortedGradeVector {
    let mut grades = v.0.clone();
    grades.sort_unstable_by(|a, b| b.cmp(a));
    SortedGradeVector(grades)
}

/// Leximax comparison: the first position at which the sorted vectors
/// differ decides.
pub fn compare_intensity(u: &SortedGradeVector, v: &SortedGradeVector) -> Result<Ordering> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    Ok(lex(&u.0, &v.0))
}

/// Total preorder of cells by leximax intensity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    vectors: Vec<SortedGradeVector>,
    /// Cell indices, weakest first; ties ordered by index.
    order: Vec<usize>,
    /// Ranges into `order` of cells sharing one vector, weakest first.
    tiers: Vec<Range<usize>>,
    /// Tier of every cell.
    tier_of: Vec<usize>,
}

impl Ranking {
    pub fn from_vectors(vectors: Vec<SortedGradeVector>) -> Result<Self> {
        if let Some(first) = vectors.first() {
            if let Some(bad) = vectors.iter().find(|v| v.len() != first.len()) {
                return Err(Error::LengthMismatch(first.len(), bad.len()));
            }
        }
        let mut order: Vec<usize> = (0..vectors.len()).collect();
        order.sort_by(|&a, &b| vectors[a].cmp(&vectors[b]).then(a.cmp(&b)));

        let mut tiers = Vec::new();
        let mut tier_of = vec![0; vectors.len()];
        let mut lo = 0;
        while lo < order.len() {
            let mut hi = lo + 1;
            while hi < order.len() && vectors[order[hi]] == vectors[order[lo]] {
                hi += 1;
            }
            for &cell in &order[lo..hi] {
                tier_of[cell] = tiers.len();
            }
            tiers.push(lo..hi);
            lo = hi;
        }
        Ok(Self {
            vectors,
            order,
            tiers,
            tier_of,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, cell: usize) -> &SortedGradeVector {
        &self.vectors[cell]
    }

    pub fn vectors(&self) -> &[SortedGradeVector] {
        &self.vectors
    }

    /// Cells weakest first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Equivalence classes of tied cells, weakest first.
    pub fn tiers(&self) -> impl DoubleEndedIterator<Item = &[usize]> + ExactSizeIterator {
        self.tiers.iter().map(|r| &self.order[r.clone()])
    }

    pub fn tier_count(&self) -> usize {
        self.tiers.len()
    }

    pub fn tier_of(&self, cell: usize) -> usize {
        self.tier_of[cell]
    }

    /// Number of cells strictly less intense than `cell`.
    pub fn position(&self, cell: usize) -> usize {
        self.tiers[self.tier_of[cell]].start
    }

    pub fn compare_cells(&self, a: usize, b: usize) -> Ordering {
        self.tier_of[a].cmp(&self.tier_of[b])
    }
}

pub fn rank_vectors(vectors: &[GradeVector]) -> Result<Ranking> {
    Ranking::from_vectors(vectors.iter().map(sort_desc).collect())
}

/// Ranks cells by the leximax of the given per-country grade fields.
pub fn rank_cells(fields: &[GradeField]) -> Result<Ranking> {
    let Some(first) = fields.first() else {
        return Err(Error::InvalidScheme("no grade fields to rank".into()));
    };
    let cells = first.len();
    for f in fields {
        if f.len() != cells {
            return Err(Error::GridMismatch(cells, f.len()));
        }
        if f.levels != first.levels {
            return Err(Error::InvalidScheme(format!(
                "mixed grade scales ({} vs {})",
                first.levels, f.levels
            )));
        }
        if let Some(&grade) = f.grades.iter().find(|&&g| g as usize >= f.levels) {
            return Err(Error::GradeOutOfScale {
                grade,
                levels: f.levels,
            });
        }
    }
    let vectors = (0..cells)
        .map(|cell| {
            sort_desc(&GradeVector(
                fields.iter().map(|f| f.grades[cell]).collect(),
            ))
        })
        .collect();
    Ranking::from_vectors(vectors)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThresholdScheme {
    /// `classes` rank-percentile classes; zero vectors always land in class 0.
    Quantile { classes: usize },
    /// Class of a cell is the number of boundaries it meets or exceeds.
    ReferenceVectors { boundaries: Vec<SortedGradeVector> },
}

impl ThresholdScheme {
    pub fn quantile(classes: usize) -> Self {
        ThresholdScheme::Quantile { classes }
    }

    pub fn class_count(&self) -> usize {
        match self {
            ThresholdScheme::Quantile { classes } => *classes,
            ThresholdScheme::ReferenceVectors { boundaries } => boundaries.len() + 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ThresholdScheme::Quantile { classes } => {
                if *classes < 2 || *classes > u8::MAX as usize + 1 {
                    return Err(Error::InvalidScheme(format!(
                        "quantile scheme needs 2..=256 classes, got {classes}"
                    )));
                }
            }
            ThresholdScheme::ReferenceVectors { boundaries } => {
                if boundaries.is_empty() {
                    return Err(Error::InvalidScheme("no reference vectors".into()));
                }
                for w in boundaries.windows(2) {
                    if compare_intensity(&w[0], &w[1])? != Ordering::Less {
                        return Err(Error::InvalidScheme(format!(
                            "reference vectors {:?} and {:?} are not strictly increasing",
                            w[0].grades(),
                            w[1].grades()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Bin of an equivalence class spanning sorted positions `lo..hi` out of
/// `total`, chosen by the class midpoint: `floor(bins * (lo + hi) / (2 * total))`.
pub(crate) fn midpoint_bin(lo: usize, hi: usize, total: usize, bins: usize) -> usize {
    debug_assert!(lo < hi && hi <= total);
    ((bins * (lo + hi)) / (2 * total)).min(bins - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictClassField {
    pub class_count: usize,
    pub classes: Vec<u8>,
}

impl ConflictClassField {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_count];
        for &c in &self.classes {
            counts[c as usize] += 1;
        }
        counts
    }
}

/// Cuts a ranking into intensity classes.
///
/// Quantile mode pins zero vectors to class 0 and splits the remaining cells
/// into `N - 1` rank-percentile bins, classes `1..N`. A tier of tied cells is
/// never split: it goes to the bin holding the midpoint of its rank range.
pub fn classify(ranking: &Ranking, scheme: &ThresholdScheme) -> Result<ConflictClassField> {
    scheme.validate()?;
    let mut classes = vec![0u8; ranking.len()];
    match scheme {
        ThresholdScheme::Quantile { classes: n } => {
            let positive: Vec<&[usize]> = ranking
                .tiers()
                .filter(|tier| !ranking.vector(tier[0]).is_zero())
                .collect();
            let total: usize = positive.iter().map(|t| t.len()).sum();
            let mut lo = 0;
            for tier in positive {
                let hi = lo + tier.len();
                let class = 1 + midpoint_bin(lo, hi, total, n - 1) as u8;
                for &cell in tier {
                    classes[cell] = class;
                }
                lo = hi;
            }
        }
        ThresholdScheme::ReferenceVectors { boundaries } => {
            for (cell, class) in classes.iter_mut().enumerate() {
                let v = ranking.vector(cell);
                let mut met = 0u8;
                for b in boundaries {
                    if compare_intensity(v, b)? != Ordering::Less {
                        met += 1;
                    }
                }
                *class = met;
            }
        }
    }
    Ok(ConflictClassField {
        class_count: scheme.class_count(),
        classes,
    })
}

/// Step one: collapse per-country grades for a single resource into a
/// forecast on the same grade scale.
pub fn aggregate_resource(fields: &[GradeField], scheme: &ThresholdScheme) -> Result<GradeField> {
    let first = fields
        .first()
        .ok_or_else(|| Error::InvalidScheme("no grade fields to aggregate".into()))?;
    if scheme.class_count() != first.levels {
        return Err(Error::ClassCountMismatch {
            classes: scheme.class_count(),
            grades: first.levels,
        });
    }
    if let Some(other) = fields.iter().find(|f| f.resource != first.resource) {
        return Err(Error::InvalidScheme(format!(
            "mixed resources {} and {}",
            first.resource, other.resource
        )));
    }
    let ranking = rank_cells(fields)?;
    let classes = classify(&ranking, scheme)?;
    Ok(GradeField {
        country: None,
        resource: first.resource,
        levels: first.levels,
        grades: classes.classes,
    })
}

/// Per-cell step-two vectors: each forecast grade times its weight, rounded
/// half up and clamped to the grade scale.
pub fn weighted_forecast_vectors(
    forecasts: &[GradeField],
    weights: &[f64],
) -> Result<Vec<GradeVector>> {
    let first = forecasts
        .first()
        .ok_or_else(|| Error::InvalidScheme("no forecasts to aggregate".into()))?;
    if weights.len() != forecasts.len() {
        return Err(Error::LengthMismatch(forecasts.len(), weights.len()));
    }
    if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::NonPositiveWeight(w));
    }
    for f in forecasts {
        if f.len() != first.len() {
            return Err(Error::GridMismatch(first.len(), f.len()));
        }
        if f.levels != first.levels {
            return Err(Error::InvalidScheme(format!(
                "mixed grade scales ({} vs {})",
                first.levels, f.levels
            )));
        }
    }
    let top = (first.levels - 1) as f64;
    Ok((0..first.len())
        .map(|cell| {
            GradeVector(
                forecasts
                    .iter()
                    .zip(weights)
                    .map(|(f, &w)| (f.grades[cell] as f64 * w + 0.5).floor().clamp(0.0, top) as u8)
                    .collect(),
            )
        })
        .collect())
}

/// Step two, returning the ranking alongside the classes.
pub fn aggregate_overall_ranked(
    forecasts: &[GradeField],
    step2_weights: &[f64],
    scheme: &ThresholdScheme,
) -> Result<(Ranking, ConflictClassField)> {
    let vectors = weighted_forecast_vectors(forecasts, step2_weights)?;
    let ranking = rank_vectors(&vectors)?;
    let classes = classify(&ranking, scheme)?;
    Ok((ranking, classes))
}

/// Step two: leximax over the (weighted) per-resource forecasts.
pub fn aggregate_overall(
    forecasts: &[GradeField],
    step2_weights: &[f64],
    scheme: &ThresholdScheme,
) -> Result<ConflictClassField> {
    aggregate_overall_ranked(forecasts, step2_weights, scheme).map(|(_, c)| c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::utility::Resource;

    fn sv(g: &[u8]) -> SortedGradeVector {
        SortedGradeVector::new(g.to_vec()).unwrap()
    }

    fn gf(country: &str, grades: Vec<u8>) -> GradeField {
        GradeField {
            country: Some(country.into()),
            resource: Resource::Gas,
            levels: 6,
            grades,
        }
    }

    #[test]
    fn sort_examples() {
        assert_eq!(sort_desc(&GradeVector(vec![0, 0, 0])).grades(), &[0, 0, 0]);
        assert_eq!(sort_desc(&GradeVector(vec![2, 5, 3])).grades(), &[5, 3, 2]);
    }

    #[test]
    fn compare_examples() {
        assert_eq!(
            compare_intensity(&sv(&[5, 3, 0]), &sv(&[5, 2, 2])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            compare_intensity(&sv(&[5, 5, 5]), &sv(&[5, 5, 5])).unwrap(),
            Ordering::Equal
        );
        assert!(matches!(
            compare_intensity(&sv(&[5, 5]), &sv(&[5, 5, 5])),
            Err(Error::LengthMismatch(2, 3))
        ));
        assert!(SortedGradeVector::new(vec![1, 2]).is_err());
    }

    #[test]
    fn ranking_total_tie_is_one_tier() {
        let r = rank_cells(&[gf("A", vec![2; 5]), gf("B", vec![1; 5])]).unwrap();
        assert_eq!(r.tier_count(), 1);
        assert!((0..5).all(|c| r.position(c) == 0));
    }

    #[test]
    fn ranking_unique_maximum() {
        let mut a = vec![0; 6];
        let mut b = vec![0; 6];
        a[3] = 5;
        b[3] = 5;
        let r = rank_cells(&[gf("A", a), gf("B", b)]).unwrap();
        assert_eq!(*r.order().last().unwrap(), 3);
        assert_eq!(r.tiers().last().unwrap(), &[3]);
        assert_eq!(r.position(3), 5);
    }

    #[test]
    fn rank_cells_validates_inputs() {
        assert!(matches!(
            rank_cells(&[gf("A", vec![0; 4]), gf("B", vec![0; 5])]),
            Err(Error::GridMismatch(4, 5))
        ));
        assert!(matches!(
            rank_cells(&[gf("A", vec![6])]),
            Err(Error::GradeOutOfScale { grade: 6, .. })
        ));
    }

    #[test]
    fn classify_all_tied_single_class() {
        let r = rank_cells(&[gf("A", vec![3; 7])]).unwrap();
        let c = classify(&r, &ThresholdScheme::quantile(6)).unwrap();
        assert!(c.classes.iter().all(|&x| x == c.classes[0]));
    }

    #[test]
    fn classify_reference_single_boundary() {
        let fields = vec![
            gf("A", vec![0, 1, 0, 4]),
            gf("B", vec![0, 0, 2, 0]),
            gf("C", vec![0; 4]),
        ];
        let r = rank_cells(&fields).unwrap();
        let scheme = ThresholdScheme::ReferenceVectors {
            boundaries: vec![sv(&[1, 0, 0])],
        };
        let c = classify(&r, &scheme).unwrap();
        assert_eq!(c.classes, vec![0, 1, 1, 1]);
        assert_eq!(c.class_count, 2);
    }

    #[test]
    fn classify_zero_vectors_stay_in_class_zero() {
        let r = rank_cells(&[gf("A", vec![0, 0, 0, 0, 0, 0, 0, 0, 1])]).unwrap();
        let c = classify(&r, &ThresholdScheme::quantile(6)).unwrap();
        assert_eq!(&c.classes[..8], &[0; 8]);
        // A lone positive cell sits at the median of the positive population.
        assert_eq!(c.classes[8], 3);
    }

    #[test]
    fn scheme_validation() {
        assert!(ThresholdScheme::quantile(1).validate().is_err());
        let bad = ThresholdScheme::ReferenceVectors {
            boundaries: vec![sv(&[2, 0]), sv(&[1, 1])],
        };
        assert!(bad.validate().is_err());
        let dup = ThresholdScheme::ReferenceVectors {
            boundaries: vec![sv(&[1, 0]), sv(&[1, 0])],
        };
        assert!(dup.validate().is_err());
    }

    #[test]
    fn single_country_forecast_is_monotone_relabeling() {
        let grades = vec![0, 3, 1, 5, 3, 2, 0, 4];
        let f =
            aggregate_resource(&[gf("A", grades.clone())], &ThresholdScheme::quantile(6)).unwrap();
        for a in 0..grades.len() {
            for b in 0..grades.len() {
                if grades[a] < grades[b] {
                    assert!(f.grades[a] <= f.grades[b]);
                }
                if grades[a] == grades[b] {
                    assert_eq!(f.grades[a], f.grades[b]);
                }
            }
            assert_eq!(grades[a] == 0, f.grades[a] == 0);
        }
    }

    #[test]
    fn zero_inputs_give_zero_forecast() {
        let f = aggregate_resource(
            &[gf("A", vec![0; 9]), gf("B", vec![0; 9])],
            &ThresholdScheme::quantile(6),
        )
        .unwrap();
        assert_eq!(f.grades, vec![0; 9]);
        assert_eq!(f.country, None);
    }

    #[test]
    fn forecast_scheme_must_match_scale() {
        assert!(matches!(
            aggregate_resource(&[gf("A", vec![0; 3])], &ThresholdScheme::quantile(4)),
            Err(Error::ClassCountMismatch {
                classes: 4,
                grades: 6
            })
        ));
    }

    #[test]
    fn overall_rejects_nonpositive_weights() {
        let f = vec![gf("A", vec![1, 2]), gf("B", vec![2, 1])];
        assert!(matches!(
            aggregate_overall(&f, &[1.0, 0.0], &ThresholdScheme::quantile(6)),
            Err(Error::NonPositiveWeight(_))
        ));
    }

    #[test]
    fn weights_round_half_up_and_clamp() {
        let f = vec![gf("A", vec![1, 3, 5]), gf("B", vec![1, 1, 1])];
        let v = weighted_forecast_vectors(&f, &[1.5, 2.5]).unwrap();
        // 1.5 -> 2, 4.5 -> 5, 7.5 -> clamp 5; 2.5 -> 3.
        assert_eq!(v[0].0, vec![2, 3]);
        assert_eq!(v[1].0, vec![5, 3]);
        assert_eq!(v[2].0, vec![5, 3]);
    }

    #[test]
    fn identity_weights_are_plain_leximax() {
        let f = vec![
            gf("A", vec![1, 4, 0]),
            gf("B", vec![3, 0, 0]),
            gf("C", vec![2, 2, 0]),
        ];
        let (ranking, _) =
            aggregate_overall_ranked(&f, &[1.0; 3], &ThresholdScheme::quantile(6)).unwrap();
        assert_eq!(ranking.vector(0).grades(), &[3, 2, 1]);
        assert_eq!(ranking.vector(1).grades(), &[4, 2, 0]);
        assert_eq!(ranking.order(), &[2, 0, 1]);
    }
}
