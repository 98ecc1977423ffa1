//! Pareto and epsilon dominance, mean scalarization, and dominance-depth
//! ranking by nondominated sorting.
//!
//! Orientation is minimization throughout: a lower aggregated mobility value
//! means a larger reduction, which is "better".

use std::collections::BTreeMap;

use thiserror::Error;

use crate::aggregate::ObjectiveVector;
use crate::ingest::LocalityKey;

#[derive(Debug, Error)]
pub enum McdmError {
    #[error("objective vectors have different lengths ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("negative component {0}; lift vectors before epsilon comparison")]
    NegativeComponent(f64),
    #[error("epsilon must be > 0, got {0}")]
    InvalidEpsilon(f64),
    #[error("empty objective vector")]
    EmptyVector,
    #[error("no vectors to rank")]
    NoVectors,
}

/// Pairwise dominance relation, stated as "first argument vs second".
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum DominanceRelation {
    /// Strictly smaller in every component.
    StrictlyDominates,
    /// No larger anywhere, strictly smaller somewhere.
    Dominates,
    /// No larger anywhere.
    WeaklyDominates,
    /// Equal everywhere.
    Indifferent,
    /// Each is strictly smaller somewhere.
    Incomparable,
}

impl DominanceRelation {
    /// Whether the relation entails weak dominance of the first argument.
    pub fn implies_weak_dominance(self) -> bool {
        matches!(
            self,
            DominanceRelation::StrictlyDominates
                | DominanceRelation::Dominates
                | DominanceRelation::WeaklyDominates
                | DominanceRelation::Indifferent
        )
    }
}

/// Multiplicative is the published form; additive is available for
/// sensitivity checks on already-shifted data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum EpsilonForm {
    Multiplicative,
    Additive,
}

/// How two objective vectors are compared during ranking.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum Comparator {
    Pareto,
    Epsilon { epsilon: f64, form: EpsilonForm },
    MeanScalarized,
}

impl Comparator {
    pub fn epsilon(epsilon: f64) -> Result<Self, McdmError> {
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(McdmError::InvalidEpsilon(epsilon));
        }
        Ok(Comparator::Epsilon {
            epsilon,
            form: EpsilonForm::Multiplicative,
        })
    }

    pub fn epsilon_with_form(epsilon: f64, form: EpsilonForm) -> Result<Self, McdmError> {
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(McdmError::InvalidEpsilon(epsilon));
        }
        Ok(Comparator::Epsilon { epsilon, form })
    }

    pub fn describe(&self) -> String {
        match self {
            Comparator::Pareto => "pareto".to_string(),
            Comparator::Epsilon { epsilon, form } => match form {
                EpsilonForm::Multiplicative => format!("epsilon={epsilon}"),
                EpsilonForm::Additive => format!("epsilon={epsilon} (additive)"),
            },
            Comparator::MeanScalarized => "mean-scalarized".to_string(),
        }
    }
}

fn check_dims(a: &[f64], b: &[f64]) -> Result<(), McdmError> {
    if a.len() != b.len() {
        return Err(McdmError::DimensionMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(McdmError::EmptyVector);
    }
    Ok(())
}

/// Componentwise Pareto comparison of `a` vs `b`. Returns the strongest
/// relation that holds among strict dominance, dominance, indifference, and
/// incomparability; weak dominance is derivable via
/// [`DominanceRelation::implies_weak_dominance`].
pub fn pareto_compare(a: &[f64], b: &[f64]) -> Result<DominanceRelation, McdmError> {
    check_dims(a, b)?;
    let mut a_strict = false;
    let mut b_strict = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            a_strict = true;
        } else if y < x {
            b_strict = true;
        }
    }
    Ok(match (a_strict, b_strict) {
        (false, false) => DominanceRelation::Indifferent,
        (true, false) => {
            if a.iter().zip(b).all(|(x, y)| x < y) {
                DominanceRelation::StrictlyDominates
            } else {
                DominanceRelation::Dominates
            }
        }
        (false, true) => DominanceRelation::Incomparable, // b dominates a
        (true, true) => DominanceRelation::Incomparable,
    })
}

/// Multiplicative epsilon-dominance for minimization: `a` epsilon-dominates
/// `b` iff `a_i <= (1 + epsilon) * b_i` for every component. Both vectors
/// must be non-negative (see [`nonneg_lift`]).
pub fn eps_dominates(a: &[f64], b: &[f64], epsilon: f64) -> Result<bool, McdmError> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(McdmError::InvalidEpsilon(epsilon));
    }
    check_dims(a, b)?;
    if let Some(&v) = a.iter().chain(b).find(|v| **v < 0.0) {
        return Err(McdmError::NegativeComponent(v));
    }
    Ok(a.iter().zip(b).all(|(x, y)| *x <= (1.0 + epsilon) * y))
}

/// Additive epsilon-dominance: `a_i <= b_i + epsilon` for every component.
pub fn eps_dominates_additive(a: &[f64], b: &[f64], epsilon: f64) -> Result<bool, McdmError> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(McdmError::InvalidEpsilon(epsilon));
    }
    check_dims(a, b)?;
    Ok(a.iter().zip(b).all(|(x, y)| *x <= y + epsilon))
}

/// If any component across the set is negative, adds one shared scalar (the
/// negated global minimum) to every component of every vector; otherwise
/// returns the set unchanged. The shift preserves all Pareto relations.
/// Returns the lifted vectors and the lift applied.
pub fn nonneg_lift(vectors: &[ObjectiveVector]) -> (Vec<ObjectiveVector>, f64) {
    let min = vectors
        .iter()
        .flat_map(|v| v.components.iter())
        .fold(f64::INFINITY, |acc, v| acc.min(*v));
    if !min.is_finite() || min >= 0.0 {
        return (vectors.to_vec(), 0.0);
    }
    let lift = -min;
    let lifted = vectors
        .iter()
        .map(|v| {
            ObjectiveVector::new(
                v.key.clone(),
                v.period_index,
                v.components.iter().map(|c| c + lift).collect(),
            )
        })
        .collect();
    (lifted, lift)
}

/// Arithmetic mean of the components. Under the mean-scalarized comparator
/// `a` dominates `b` iff `mean(a) < mean(b)`; equal means are indifferent.
pub fn mean_scalarize(v: &[f64]) -> Result<f64, McdmError> {
    if v.is_empty() {
        return Err(McdmError::EmptyVector);
    }
    Ok(v.iter().sum::<f64>() / v.len() as f64)
}

/// The asymmetric "counts as dominating" predicate that feeds nondominated
/// sorting. Mutual epsilon-dominance is treated as indifference, which keeps
/// the predicate antisymmetric up to the cycles handled by the sort.
pub fn sort_dominates(a: &[f64], b: &[f64], comparator: &Comparator) -> Result<bool, McdmError> {
    match comparator {
        Comparator::Pareto => Ok(matches!(
            pareto_compare(a, b)?,
            DominanceRelation::StrictlyDominates | DominanceRelation::Dominates
        )),
        Comparator::Epsilon { epsilon, form } => {
            let (ab, ba) = match form {
                EpsilonForm::Multiplicative => (
                    eps_dominates(a, b, *epsilon)?,
                    eps_dominates(b, a, *epsilon)?,
                ),
                EpsilonForm::Additive => (
                    eps_dominates_additive(a, b, *epsilon)?,
                    eps_dominates_additive(b, a, *epsilon)?,
                ),
            };
            Ok(ab && !ba)
        }
        Comparator::MeanScalarized => Ok(mean_scalarize(a)? < mean_scalarize(b)?),
    }
}

/// Depths assigned by one nondominated sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedDepths {
    /// Depth per input vector, 1-based and contiguous.
    pub depths: Vec<usize>,
    /// True when a dominance cycle (possible only under epsilon) forced the
    /// remaining vectors into one cluster.
    pub cycle_warning: bool,
}

/// Iterative front peeling: depth 1 holds the vectors not dominated by any
/// other, which are then removed, and so on. If an iteration finds no
/// undominated vector among the remainder (an epsilon-dominance cycle), all
/// remaining vectors receive the current depth and a cycle warning is set.
pub fn nondominated_sort(
    vectors: &[ObjectiveVector],
    comparator: &Comparator,
) -> Result<SortedDepths, McdmError> {
    let n = vectors.len();
    if n == 0 {
        return Err(McdmError::NoVectors);
    }
    let mut dominates = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                dominates[i][j] =
                    sort_dominates(&vectors[i].components, &vectors[j].components, comparator)?;
            }
        }
    }

    let mut depths = vec![0usize; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut depth = 0usize;
    let mut cycle_warning = false;
    while !remaining.is_empty() {
        depth += 1;
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&j| !remaining.iter().any(|&i| dominates[i][j]))
            .collect();
        if front.is_empty() {
            // Cycle: everyone left is dominated by someone left.
            for &j in &remaining {
                depths[j] = depth;
            }
            cycle_warning = true;
            break;
        }
        for &j in &front {
            depths[j] = depth;
        }
        remaining.retain(|j| !front.contains(j));
    }
    Ok(SortedDepths {
        depths,
        cycle_warning,
    })
}

/// Provenance attached to a ranking: how the vectors were transformed before
/// sorting.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize)]
pub struct RankingProvenance {
    /// Shared scalar added by [`nonneg_lift`] before epsilon comparison.
    pub lift: Option<f64>,
    /// Rank-sum vectors were divided by the period length (mean rank) so the
    /// multiplicative tolerance is comparable across granularities.
    pub rs_mean_rank_normalized: bool,
}

/// Dominance-depth ranking per time period, with comparator provenance.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DepthRanking {
    pub comparator: Comparator,
    /// One map per period: locality -> depth (1-based, contiguous).
    pub periods: Vec<BTreeMap<LocalityKey, usize>>,
    /// Period indices where a cycle forced a shared depth.
    pub cycle_warnings: Vec<usize>,
    pub provenance: RankingProvenance,
}

impl DepthRanking {
    /// Depth of a locality in one period. Lookup matches on the
    /// (country_code, sub_region_1, sub_region_2) triple so partial keys
    /// (without the country name) resolve too.
    pub fn depth(&self, period: usize, key: &LocalityKey) -> Option<usize> {
        self.periods.get(period).and_then(|m| {
            m.get(key).copied().or_else(|| {
                m.iter()
                    .find(|(k, _)| k.triple() == key.triple())
                    .map(|(_, d)| *d)
            })
        })
    }
}

/// Ranks each period independently with [`nondominated_sort`]. For epsilon
/// comparisons the vectors of every period are first lifted non-negative by
/// one shared scalar, mirroring the shared shift used for AUC aggregation.
pub fn rank_run(
    periods: &[Vec<ObjectiveVector>],
    comparator: &Comparator,
) -> Result<DepthRanking, McdmError> {
    if periods.is_empty() || periods.iter().any(|p| p.is_empty()) {
        return Err(McdmError::NoVectors);
    }
    let mut provenance = RankingProvenance::default();
    let periods_owned: Vec<Vec<ObjectiveVector>> = match comparator {
        Comparator::Epsilon { .. } => {
            let flat: Vec<ObjectiveVector> = periods.iter().flatten().cloned().collect();
            let (lifted, lift) = nonneg_lift(&flat);
            provenance.lift = Some(lift);
            let mut it = lifted.into_iter();
            periods
                .iter()
                .map(|p| it.by_ref().take(p.len()).collect())
                .collect()
        }
        _ => periods.to_vec(),
    };

    let mut maps = Vec::with_capacity(periods_owned.len());
    let mut cycle_warnings = Vec::new();
    for (idx, vectors) in periods_owned.iter().enumerate() {
        let sorted = nondominated_sort(vectors, comparator)?;
        if sorted.cycle_warning {
            cycle_warnings.push(idx);
        }
        let map: BTreeMap<LocalityKey, usize> = vectors
            .iter()
            .zip(&sorted.depths)
            .map(|(v, d)| (v.key.clone(), *d))
            .collect();
        maps.push(map);
    }
    Ok(DepthRanking {
        comparator: *comparator,
        periods: maps,
        cycle_warnings,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::LocalityKey;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn named(idx: usize, components: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(
            LocalityKey::country(&format!("L{idx}"), ""),
            0,
            components.to_vec(),
        )
    }

    #[test]
    fn pareto_relations_hand_cases() {
        use DominanceRelation::*;
        let cmp = |a: &[f64], b: &[f64]| pareto_compare(a, b).unwrap();
        assert_eq!(
            cmp(&[-1.0; 5], &[0.0; 5]),
            StrictlyDominates,
            "smaller everywhere"
        );
        assert_eq!(cmp(&[0.0, -1.0], &[0.0, 0.0]), Dominates);
        assert_eq!(cmp(&[-1.0, 1.0], &[1.0, -1.0]), Incomparable);
        assert_eq!(cmp(&[2.0, 2.0], &[2.0, 2.0]), Indifferent);
        // reversed dominance is incomparability from a's standpoint
        assert_eq!(cmp(&[0.0, 0.0], &[0.0, -1.0]), Incomparable);
        assert!(matches!(
            pareto_compare(&[1.0], &[1.0, 2.0]),
            Err(McdmError::DimensionMismatch(1, 2))
        ));
    }

    #[test]
    fn eps_dominance_hand_examples() {
        assert!(eps_dominates(&[1.0, 1.0], &[1.0, 0.95], 0.1).unwrap());
        assert!(!eps_dominates(&[1.05, 1.0], &[1.0, 1.0], 0.01).unwrap());
        assert!(matches!(
            eps_dominates(&[-0.1, 1.0], &[1.0, 1.0], 0.1),
            Err(McdmError::NegativeComponent(_))
        ));
        assert!(matches!(
            eps_dominates(&[1.0], &[1.0], 0.0),
            Err(McdmError::InvalidEpsilon(_))
        ));
    }

    #[test]
    fn eps_additive_form() {
        assert!(eps_dominates_additive(&[1.0, 1.0], &[0.95, 0.95], 0.06).unwrap());
        assert!(!eps_dominates_additive(&[1.0, 1.0], &[0.9, 0.95], 0.06).unwrap());
        // additive form tolerates negative components
        assert!(eps_dominates_additive(&[-1.0], &[-1.05], 0.1).unwrap());
    }

    #[test]
    fn lift_makes_components_non_negative_and_preserves_pareto() {
        let vs = vec![named(0, &[-2.0, 1.0]), named(1, &[0.5, 3.0])];
        let (lifted, lift) = nonneg_lift(&vs);
        assert_eq!(lift, 2.0);
        assert_eq!(lifted[0].components, vec![0.0, 3.0]);
        assert_eq!(lifted[1].components, vec![2.5, 5.0]);
        assert_eq!(
            pareto_compare(&vs[0].components, &vs[1].components).unwrap(),
            pareto_compare(&lifted[0].components, &lifted[1].components).unwrap()
        );

        let nonneg = vec![named(0, &[0.0, 1.0])];
        let (same, zero) = nonneg_lift(&nonneg);
        assert_eq!(zero, 0.0);
        assert_eq!(same[0].components, nonneg[0].components);
    }

    #[test]
    fn mean_scalarization() {
        assert_eq!(mean_scalarize(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap(), 3.0);
        assert!(matches!(mean_scalarize(&[]), Err(McdmError::EmptyVector)));
        // equal means: neither sort-dominates
        let m = Comparator::MeanScalarized;
        assert!(!sort_dominates(&[0.0, 2.0], &[1.0, 1.0], &m).unwrap());
        assert!(!sort_dominates(&[1.0, 1.0], &[0.0, 2.0], &m).unwrap());
    }

    #[test]
    fn sort_dominates_demotes_mutual_eps_dominance() {
        let eps = Comparator::epsilon(0.1).unwrap();
        // both eps-dominate each other: 1.0 <= 1.1*1.05, 1.0 <= 1.1*0.95;
        // 1.05 <= 1.1, 0.95 <= 1.1
        let a = [1.0, 1.0];
        let b = [1.05, 0.95];
        assert!(eps_dominates(&a, &b, 0.1).unwrap());
        assert!(eps_dominates(&b, &a, 0.1).unwrap());
        assert!(!sort_dominates(&a, &b, &eps).unwrap());
        assert!(!sort_dominates(&b, &a, &eps).unwrap());

        let pareto = Comparator::Pareto;
        assert!(sort_dominates(&[0.0, 0.0], &[1.0, 1.0], &pareto).unwrap());
        assert!(!sort_dominates(&[1.0, 1.0], &[0.0, 0.0], &pareto).unwrap());
    }

    #[test]
    fn nondominated_sort_hand_cases() {
        let pareto = Comparator::Pareto;
        let single = vec![named(0, &[0.0, 0.0])];
        assert_eq!(nondominated_sort(&single, &pareto).unwrap().depths, vec![1]);

        let vs = vec![
            named(0, &[0.0, 0.0]),
            named(1, &[1.0, 1.0]),
            named(2, &[0.0, 2.0]),
            named(3, &[2.0, 0.0]),
        ];
        let sorted = nondominated_sort(&vs, &pareto).unwrap();
        assert_eq!(sorted.depths, vec![1, 2, 2, 2]);
        assert!(!sorted.cycle_warning);
    }

    #[test]
    fn nondominated_sort_handles_eps_cycle() {
        // Rock-paper-scissors under multiplicative epsilon: each vector
        // sort-dominates the next, so no one is undominated.
        let eps = Comparator::epsilon(0.15).unwrap();
        let vs = vec![
            named(0, &[0.9, 1.0, 1.1]),
            named(1, &[1.1, 0.9, 1.0]),
            named(2, &[1.0, 1.1, 0.9]),
        ];
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            assert!(
                sort_dominates(&vs[i].components, &vs[j].components, &eps).unwrap(),
                "{i} should sort-dominate {j}"
            );
        }
        let sorted = nondominated_sort(&vs, &eps).unwrap();
        assert_eq!(sorted.depths, vec![1, 1, 1]);
        assert!(sorted.cycle_warning);
    }

    fn random_vector(rng: &mut ChaCha8Rng, dims: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..dims).map(|_| rng.gen_range(lo..hi)).collect()
    }

    #[test]
    fn pareto_axioms_over_random_pairs() {
        use DominanceRelation::*;
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10_000 {
            let dims = rng.gen_range(1..6);
            // Coarse grid so ties and dominance actually occur.
            let a: Vec<f64> = (0..dims).map(|_| rng.gen_range(-2..3) as f64).collect();
            let b: Vec<f64> = (0..dims).map(|_| rng.gen_range(-2..3) as f64).collect();
            let ab = pareto_compare(&a, &b).unwrap();
            let ba = pareto_compare(&b, &a).unwrap();
            match ab {
                StrictlyDominates | Dominates => {
                    assert!(!ba.implies_weak_dominance(), "antisymmetry violated");
                }
                Indifferent => assert_eq!(ba, Indifferent),
                Incomparable => {
                    // incomparability is symmetric unless b dominates a
                    if !matches!(ba, StrictlyDominates | Dominates) {
                        assert_eq!(ba, Incomparable);
                    }
                }
                WeaklyDominates => unreachable!("never returned directly"),
            }
            // strength chain
            if ab == StrictlyDominates {
                assert!(ab.implies_weak_dominance());
                assert!(a.iter().zip(&b).all(|(x, y)| x <= y));
            }
        }
    }

    #[test]
    fn pareto_dominance_is_transitive() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let mut checked = 0;
        for _ in 0..20_000 {
            let a: Vec<f64> = (0..3).map(|_| rng.gen_range(-2..3) as f64).collect();
            let b: Vec<f64> = (0..3).map(|_| rng.gen_range(-2..3) as f64).collect();
            let c: Vec<f64> = (0..3).map(|_| rng.gen_range(-2..3) as f64).collect();
            let dom = |x: &[f64], y: &[f64]| {
                matches!(
                    pareto_compare(x, y).unwrap(),
                    DominanceRelation::StrictlyDominates | DominanceRelation::Dominates
                )
            };
            if dom(&a, &b) && dom(&b, &c) {
                checked += 1;
                assert!(dom(&a, &c), "transitivity violated: {a:?} {b:?} {c:?}");
            }
        }
        assert!(checked > 100, "triple sample too sparse ({checked})");
    }

    #[test]
    fn eps_dominance_is_monotone_in_epsilon() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..10_000 {
            let a = random_vector(&mut rng, 5, 0.0, 10.0);
            let b = random_vector(&mut rng, 5, 0.0, 10.0);
            let eps = rng.gen_range(0.001..0.5);
            let wider = eps + rng.gen_range(0.001..0.5);
            if eps_dominates(&a, &b, eps).unwrap() {
                assert!(eps_dominates(&a, &b, wider).unwrap());
            }
        }
    }

    #[test]
    fn eps_dominance_matches_weak_pareto_at_tiny_epsilon() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..10_000 {
            let a = random_vector(&mut rng, 5, 0.0, 10.0);
            let b = random_vector(&mut rng, 5, 0.0, 10.0);
            let eps = eps_dominates(&a, &b, 1e-12).unwrap();
            let weak = pareto_compare(&a, &b).unwrap().implies_weak_dominance();
            assert_eq!(eps, weak, "a={a:?} b={b:?}");
        }
    }

    /// Self-contained quadratic front-peeling oracle (own dominance test).
    fn depth_oracle(vectors: &[Vec<f64>]) -> Vec<usize> {
        let dom = |a: &[f64], b: &[f64]| {
            a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
        };
        let n = vectors.len();
        let mut depth = vec![0usize; n];
        let mut level = 0;
        while depth.contains(&0) {
            level += 1;
            let front: Vec<usize> = (0..n)
                .filter(|&j| depth[j] == 0)
                .filter(|&j| {
                    !(0..n).any(|i| depth[i] == 0 && i != j && dom(&vectors[i], &vectors[j]))
                })
                .collect();
            for j in front {
                depth[j] = level;
            }
        }
        depth
    }

    #[test]
    fn sort_matches_quadratic_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let pareto = Comparator::Pareto;
        for _ in 0..1000 {
            let n = rng.gen_range(1..=12);
            let dims = rng.gen_range(1..=5);
            let raw: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..dims).map(|_| rng.gen_range(0..6) as f64).collect())
                .collect();
            let vectors: Vec<ObjectiveVector> =
                raw.iter().enumerate().map(|(i, v)| named(i, v)).collect();
            let sorted = nondominated_sort(&vectors, &pareto).unwrap();
            assert_eq!(sorted.depths, depth_oracle(&raw), "instance {raw:?}");
        }
    }

    #[test]
    fn depth_properties_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let pareto = Comparator::Pareto;
        for _ in 0..200 {
            let n = rng.gen_range(2..10);
            let vectors: Vec<ObjectiveVector> = (0..n)
                .map(|i| named(i, &random_vector(&mut rng, 3, -5.0, 5.0)))
                .collect();
            let sorted = nondominated_sort(&vectors, &pareto).unwrap();
            let max_depth = *sorted.depths.iter().max().unwrap();
            // depths form a contiguous 1..=k range
            for d in 1..=max_depth {
                assert!(sorted.depths.contains(&d));
            }
            for (j, &dj) in sorted.depths.iter().enumerate() {
                // (ii) every vector at depth d > 1 is dominated from depth d-1
                if dj > 1 {
                    assert!((0..n).any(|i| {
                        sorted.depths[i] == dj - 1
                            && sort_dominates(
                                &vectors[i].components,
                                &vectors[j].components,
                                &pareto,
                            )
                            .unwrap()
                    }));
                }
                // (i) equal depth means mutually non-dominating
                for (i, &di) in sorted.depths.iter().enumerate() {
                    if i != j && di == dj {
                        assert!(!sort_dominates(
                            &vectors[i].components,
                            &vectors[j].components,
                            &pareto
                        )
                        .unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn lift_leaves_pareto_depths_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let pareto = Comparator::Pareto;
        for _ in 0..100 {
            let n = rng.gen_range(2..10);
            let vectors: Vec<ObjectiveVector> = (0..n)
                .map(|i| named(i, &random_vector(&mut rng, 4, -10.0, 10.0)))
                .collect();
            let (lifted, _) = nonneg_lift(&vectors);
            assert_eq!(
                nondominated_sort(&vectors, &pareto).unwrap().depths,
                nondominated_sort(&lifted, &pareto).unwrap().depths
            );
        }
    }

    #[test]
    fn mean_comparator_gives_dense_ranking_of_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..100 {
            let n = rng.gen_range(1..10);
            let vectors: Vec<ObjectiveVector> = (0..n)
                .map(|i| {
                    // coarse values so equal means occur
                    named(
                        i,
                        &[(rng.gen_range(0..4)) as f64, (rng.gen_range(0..4)) as f64],
                    )
                })
                .collect();
            let sorted = nondominated_sort(&vectors, &Comparator::MeanScalarized).unwrap();
            // dense rank of mean values
            let mut means: Vec<f64> = vectors
                .iter()
                .map(|v| mean_scalarize(&v.components).unwrap())
                .collect();
            let mut unique = means.clone();
            unique.sort_by(|a, b| a.total_cmp(b));
            unique.dedup();
            let expected: Vec<usize> = means
                .iter_mut()
                .map(|m| unique.iter().position(|u| u == m).unwrap() + 1)
                .collect();
            assert_eq!(sorted.depths, expected);
        }
    }

    #[test]
    fn rank_run_lifts_once_across_periods() {
        let eps = Comparator::epsilon(0.05).unwrap();
        let periods = vec![
            vec![named(0, &[-3.0, 1.0]), named(1, &[0.0, 2.0])],
            vec![named(0, &[1.0, 1.0]), named(1, &[2.0, 2.0])],
        ];
        let ranking = rank_run(&periods, &eps).unwrap();
        assert_eq!(ranking.provenance.lift, Some(3.0));
        assert_eq!(ranking.periods.len(), 2);
        // single locality set, consistent keys
        let key0 = LocalityKey::country("L0", "");
        assert_eq!(ranking.depth(1, &key0), Some(1));
    }

    #[test]
    fn rank_run_single_locality_is_depth_one_everywhere() {
        let periods: Vec<Vec<ObjectiveVector>> = (0..5)
            .map(|p| {
                vec![ObjectiveVector::new(
                    LocalityKey::country("L0", ""),
                    p,
                    vec![1.0, 2.0],
                )]
            })
            .collect();
        let ranking = rank_run(&periods, &Comparator::Pareto).unwrap();
        for p in 0..5 {
            assert_eq!(ranking.depth(p, &LocalityKey::country("L0", "")), Some(1));
        }
    }
}
