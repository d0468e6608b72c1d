//! Case classification and closed-form Nash equilibria.
//!
//! Instances fall into one of six parameter regimes. With abundant capacity
//! (`ER >= D_total`, case 1) or when every type's inverse risk aversion
//! reaches `gamma / beta` (case 3), competing is dominant. When demand
//! thresholds rule competing out for everyone (case 2b), staying at night is
//! dominant. The remaining regimes (2a, 2c, 4) admit mixed equilibria
//! characterized by a single scalar: the common slack
//! `Q = ER (gamma-1)/(gamma - eps*beta) - E`, equal across mixed types iff a
//! NE exists. All equilibrium arithmetic uses the conditional demand seen by
//! a competing consumer, `E + (N-1) * sum_l r_l E_l p_l`, which matches the
//! mean-field demand as `N` grows.

use crate::model::{ConsumerType, GameInstance, PriceSchedule, StrategyProfile};
use crate::scalar::approx_eq_rel;
use crate::{Error, Result, Scalar};

/// Parameter regime of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseLabel {
    /// Capacity covers the maximum expected demand; competing is dominant.
    Case1,
    /// Scarce capacity, every type below its demand threshold: mixed NE.
    Case2a,
    /// Scarce capacity, every type above its threshold: night is dominant.
    Case2b,
    /// Threshold splits the types: `sigma1` stays at night, `sigma2` mixes.
    Case2c { sigma1: Vec<usize>, sigma2: Vec<usize> },
    /// Every type has `eps >= gamma/beta`: competing is dominant.
    Case3,
    /// `eps >= gamma/beta` splits the types: `sigma1` competes outright,
    /// `sigma2` plays the scarce-capacity game on what is left.
    Case4 { sigma1: Vec<usize>, sigma2: Vec<usize> },
}

impl CaseLabel {
    /// Short code used in tabular output: "1", "2a", "2b", "2c", "3", "4".
    pub fn code(&self) -> &'static str {
        match self {
            CaseLabel::Case1 => "1",
            CaseLabel::Case2a => "2a",
            CaseLabel::Case2b => "2b",
            CaseLabel::Case2c { .. } => "2c",
            CaseLabel::Case3 => "3",
            CaseLabel::Case4 { .. } => "4",
        }
    }

    /// Type indices with a dominant strategy (cases 2c and 4 only).
    pub fn sigma1(&self) -> &[usize] {
        match self {
            CaseLabel::Case2c { sigma1, .. } | CaseLabel::Case4 { sigma1, .. } => sigma1,
            _ => &[],
        }
    }

    /// Type indices in the mixed-candidate subset (cases 2c and 4 only).
    pub fn sigma2(&self) -> &[usize] {
        match self {
            CaseLabel::Case2c { sigma2, .. } | CaseLabel::Case4 { sigma2, .. } => sigma2,
            _ => &[],
        }
    }

    /// True for the regimes without an all-dominant outcome (2a, 2c, 4).
    pub fn is_mixed_regime(&self) -> bool {
        matches!(
            self,
            CaseLabel::Case2a | CaseLabel::Case2c { .. } | CaseLabel::Case4 { .. }
        )
    }
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Case {}", self.code())
    }
}

/// Per-type strategy kind in an equilibrium report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    DominantRes,
    DominantNonRes,
    Mixed,
}

impl std::fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StrategyKind::DominantRes => "dominant-RES",
            StrategyKind::DominantNonRes => "dominant-nonRES",
            StrategyKind::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

/// Which end of the equilibrium slice to pick.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeObjective {
    /// Maximize the night cost (worst social cost among the equilibria).
    Worst,
    /// Minimize the night cost.
    Best,
}

/// Outcome of the full equilibrium analysis of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport<T> {
    pub case: CaseLabel,
    pub kind_per_type: Vec<StrategyKind>,
    pub ne_exists: bool,
    /// Common slack `Q` across mixed types; `None` for dominant regimes or
    /// when no NE exists.
    pub common_slack: Option<T>,
    /// Aggregate demand at equilibrium, including dominant competitors.
    pub ne_demand: Option<T>,
    pub worst_profile: Option<StrategyProfile<T>>,
    pub best_profile: Option<StrategyProfile<T>>,
    /// True when the slice constraint exceeds what probabilities can carry
    /// and the equilibrium degenerates to everyone competing.
    pub saturated: bool,
}

/// Mixed-regime geometry shared by the equilibrium operations.
struct MixedSetup<T> {
    /// Types analyzed for a mixed strategy.
    mixed: Vec<usize>,
    /// Types pinned to competing (case 4's `sigma1`).
    pinned_res: Vec<usize>,
    /// Types pinned to the night zone (case 2c's `sigma1`, plus any case-4
    /// `sigma2` members squeezed out by the reduced capacity).
    pinned_nonres: Vec<usize>,
    /// Capacity available to the mixed subset.
    effective_capacity: T,
    /// Demand ceiling of the mixed subset, `N * sum_mixed r E`.
    demand_cap: T,
    /// Demand contributed by the pinned competitors, `N * sum_sigma1 r E`.
    base_demand: T,
}

fn gamma_minus_eps_beta<T: Scalar>(prices: &PriceSchedule<T>, t: &ConsumerType<T>) -> T {
    prices.gamma() - t.inv_risk_aversion() * prices.beta()
}

/// Demand threshold `ER (gamma-1) / (gamma - eps*beta)` below which a type
/// can be indifferent. Caller guarantees `gamma - eps*beta > 0`.
fn demand_threshold<T: Scalar>(capacity: T, prices: &PriceSchedule<T>, t: &ConsumerType<T>) -> T {
    capacity * (prices.gamma() - T::one()) / gamma_minus_eps_beta(prices, t)
}

/// Renewable share that makes a type indifferent between its two pure
/// strategies: `(gamma - eps*beta) / (gamma - 1) * E`.
pub fn ne_target_allocation<T: Scalar>(
    instance: &GameInstance<T>,
    type_index: usize,
) -> Result<T> {
    let t = instance.consumer_type(type_index)?;
    let prices = instance.prices();
    let num = gamma_minus_eps_beta(prices, t);
    if num < T::zero() {
        return Err(Error::Domain(
            "type has dominant RES strategy (Case 3 regime)".into(),
        ));
    }
    Ok(num / (prices.gamma() - T::one()) * t.day_demand())
}

/// Classifies an instance into one of the six parameter regimes.
pub fn classify<T: Scalar>(instance: &GameInstance<T>) -> CaseLabel {
    if instance.res_capacity() >= instance.d_total() {
        return CaseLabel::Case1;
    }
    let prices = instance.prices();
    let (dominant_res, scarce): (Vec<usize>, Vec<usize>) = instance
        .types()
        .iter()
        .map(|t| t.index())
        .partition(|&l| gamma_minus_eps_beta(prices, &instance.types()[l]) <= T::zero());
    if scarce.is_empty() {
        return CaseLabel::Case3;
    }
    if !dominant_res.is_empty() {
        return CaseLabel::Case4 {
            sigma1: dominant_res,
            sigma2: scarce,
        };
    }
    let (violators, within): (Vec<usize>, Vec<usize>) =
        instance.types().iter().map(|t| t.index()).partition(|&l| {
            let t = &instance.types()[l];
            t.day_demand() > demand_threshold(instance.res_capacity(), prices, t)
        });
    if violators.is_empty() {
        CaseLabel::Case2a
    } else if within.is_empty() {
        CaseLabel::Case2b
    } else {
        CaseLabel::Case2c {
            sigma1: violators,
            sigma2: within,
        }
    }
}

fn partial_demand<T: Scalar>(instance: &GameInstance<T>, indices: &[usize]) -> T {
    let per_consumer: T = indices
        .iter()
        .map(|&l| {
            let t = &instance.types()[l];
            t.weight() * t.day_demand()
        })
        .sum();
    instance.population() * per_consumer
}

/// Builds the mixed-regime geometry for cases 2a, 2c and 4.
fn mixed_setup<T: Scalar>(instance: &GameInstance<T>) -> Result<MixedSetup<T>> {
    let prices = instance.prices();
    match classify(instance) {
        CaseLabel::Case2a => {
            let mixed: Vec<usize> = (0..instance.num_types()).collect();
            let demand_cap = instance.d_total();
            Ok(MixedSetup {
                mixed,
                pinned_res: Vec::new(),
                pinned_nonres: Vec::new(),
                effective_capacity: instance.res_capacity(),
                demand_cap,
                base_demand: T::zero(),
            })
        }
        CaseLabel::Case2c { sigma1, sigma2 } => {
            let demand_cap = partial_demand(instance, &sigma2);
            Ok(MixedSetup {
                mixed: sigma2,
                pinned_res: Vec::new(),
                pinned_nonres: sigma1,
                effective_capacity: instance.res_capacity(),
                demand_cap,
                base_demand: T::zero(),
            })
        }
        CaseLabel::Case4 { sigma1, sigma2 } => {
            let base_demand = partial_demand(instance, &sigma1);
            let remaining = instance.res_capacity() - base_demand;
            if remaining <= T::zero() {
                // Dominant competitors absorb the whole pool; the rest of
                // the population faces the 2b regime on zero capacity.
                return Ok(MixedSetup {
                    mixed: Vec::new(),
                    pinned_res: sigma1,
                    pinned_nonres: sigma2,
                    effective_capacity: T::zero(),
                    demand_cap: T::zero(),
                    base_demand,
                });
            }
            let (violators, within): (Vec<usize>, Vec<usize>) =
                sigma2.into_iter().partition(|&l| {
                    let t = &instance.types()[l];
                    t.day_demand() > demand_threshold(remaining, prices, t)
                });
            let demand_cap = partial_demand(instance, &within);
            Ok(MixedSetup {
                mixed: within,
                pinned_res: sigma1,
                pinned_nonres: violators,
                effective_capacity: remaining,
                demand_cap,
                base_demand,
            })
        }
        other => Err(Error::State(format!(
            "{other} has a dominant-strategy outcome; no mixed equilibrium to analyze"
        ))),
    }
}

fn slacks<T: Scalar>(instance: &GameInstance<T>, setup: &MixedSetup<T>) -> Vec<T> {
    setup
        .mixed
        .iter()
        .map(|&l| {
            let t = &instance.types()[l];
            demand_threshold(setup.effective_capacity, instance.prices(), t) - t.day_demand()
        })
        .collect()
}

/// Tests mixed-NE existence: the slack `ER (gamma-1)/(gamma-eps*beta) - E`
/// must be equal (within 1e-9 relative) across all mixed types. Returns the
/// common value when it is.
pub fn ne_exists<T: Scalar>(instance: &GameInstance<T>) -> Result<Option<T>> {
    let setup = mixed_setup(instance)?;
    ne_exists_in(instance, &setup)
}

fn ne_exists_in<T: Scalar>(
    instance: &GameInstance<T>,
    setup: &MixedSetup<T>,
) -> Result<Option<T>> {
    if setup.mixed.is_empty() {
        return Err(Error::State(
            "no mixed types remain after the capacity reduction".into(),
        ));
    }
    let values = slacks(instance, setup);
    let first = values[0];
    let tol = T::rel_tolerance();
    if values.iter().all(|&q| approx_eq_rel(q, first, tol)) {
        Ok(Some(first))
    } else {
        Ok(None)
    }
}

fn common_slack_or_err<T: Scalar>(
    instance: &GameInstance<T>,
    setup: &MixedSetup<T>,
) -> Result<T> {
    ne_exists_in(instance, setup)?.ok_or_else(|| {
        Error::Domain("no mixed-strategy NE: indifference slacks differ across types".into())
    })
}

/// Derives inverse risk aversion degrees making a mixed NE possible, given
/// the degree of the smallest-demand type. `base` lists `(E, r)` pairs in
/// nondecreasing demand order.
pub fn derive_epsilons<T: Scalar>(
    base: &[(T, T)],
    epsilon0: T,
    res_capacity: T,
    prices: &PriceSchedule<T>,
) -> Result<Vec<T>> {
    derive_epsilons_anchored(base, 0, epsilon0, res_capacity, prices)
}

/// As [`derive_epsilons`], anchored at an arbitrary type whose degree is
/// given; every other type's degree follows from the common-slack relation.
pub fn derive_epsilons_anchored<T: Scalar>(
    base: &[(T, T)],
    anchor: usize,
    epsilon_anchor: T,
    res_capacity: T,
    prices: &PriceSchedule<T>,
) -> Result<Vec<T>> {
    if base.is_empty() {
        return Err(Error::InvalidArgument("no types to derive".into()));
    }
    if anchor >= base.len() {
        return Err(Error::InvalidArgument(format!(
            "anchor index {anchor} out of range for {} types",
            base.len()
        )));
    }
    if base.windows(2).any(|w| w[1].0 < w[0].0) {
        return Err(Error::InvalidArgument(
            "base types must be sorted by demand nondecreasing".into(),
        ));
    }
    if !(epsilon_anchor >= T::one()) {
        return Err(Error::Domain(format!(
            "anchor degree must be at least 1, got {epsilon_anchor}"
        )));
    }
    let gamma = prices.gamma();
    let beta = prices.beta();
    let denom_anchor = gamma - epsilon_anchor * beta;
    if denom_anchor <= T::zero() {
        return Err(Error::Domain(format!(
            "anchor degree {epsilon_anchor} is in the dominant-RES regime (eps >= gamma/beta)"
        )));
    }
    let (e_anchor, _) = base[anchor];
    let slack = res_capacity * (gamma - T::one()) / denom_anchor - e_anchor;
    base.iter()
        .map(|&(e, _)| {
            if e == e_anchor {
                return Ok(epsilon_anchor);
            }
            let denom = slack + e;
            if denom <= T::zero() {
                return Err(Error::Domain(format!(
                    "demand {e} leaves a nonpositive indifference denominator"
                )));
            }
            let eps = (gamma - res_capacity * (gamma - T::one()) / denom) / beta;
            if eps < T::one() {
                return Err(Error::Domain(format!(
                    "no admissible risk profile: demand {e} would need degree {eps} < 1"
                )));
            }
            Ok(eps)
        })
        .collect()
}

/// Expected aggregate demand at the mixed NE, including the demand of any
/// dominant competitors (case 4).
pub fn ne_demand<T: Scalar>(instance: &GameInstance<T>) -> Result<T> {
    let setup = mixed_setup(instance)?;
    let slack = common_slack_or_err(instance, &setup)?;
    Ok(setup.base_demand + mixed_demand(instance, &setup, slack))
}

fn mixed_demand<T: Scalar>(instance: &GameInstance<T>, setup: &MixedSetup<T>, slack: T) -> T {
    let n = instance.population();
    let scaled = (slack * n / (n - T::one())).max(T::zero());
    scaled.min(setup.demand_cap)
}

/// Picks a profile on the equilibrium slice. All slice profiles share the
/// same aggregate demand; they differ only in which types carry it, hence in
/// night cost. `Worst` loads low-degree types first, `Best` high-degree
/// ones. Returns the profile and whether the slice was saturated (everyone
/// competing outright).
pub fn select_ne<T: Scalar>(
    instance: &GameInstance<T>,
    objective: NeObjective,
) -> Result<(StrategyProfile<T>, bool)> {
    let setup = mixed_setup(instance)?;
    let slack = common_slack_or_err(instance, &setup)?;
    Ok(fill_slice(instance, &setup, slack, objective))
}

fn fill_slice<T: Scalar>(
    instance: &GameInstance<T>,
    setup: &MixedSetup<T>,
    slack: T,
    objective: NeObjective,
) -> (StrategyProfile<T>, bool) {
    let mut p = vec![T::zero(); instance.num_types()];
    for &l in &setup.pinned_res {
        p[l] = T::one();
    }

    // Per-opponent day energy the slice must carry: sum_mixed r E p = Q/(N-1).
    let budget = (slack / (instance.population() - T::one())).max(T::zero());
    let total_cap: T = setup
        .mixed
        .iter()
        .map(|&l| {
            let t = &instance.types()[l];
            t.weight() * t.day_demand()
        })
        .sum();

    if budget >= total_cap {
        for &l in &setup.mixed {
            p[l] = T::one();
        }
        let saturated = budget > total_cap;
        return (StrategyProfile::new(p).expect("probabilities in range"), saturated);
    }

    let mut order = setup.mixed.clone();
    order.sort_by(|&a, &b| {
        let ta = &instance.types()[a];
        let tb = &instance.types()[b];
        let key_a = (ta.inv_risk_aversion(), tb.day_demand());
        match objective {
            // Ascending degree; ties broken by larger demand first.
            NeObjective::Worst => (ta.inv_risk_aversion(), tb.day_demand(), a)
                .partial_cmp(&(tb.inv_risk_aversion(), ta.day_demand(), b))
                .expect("finite keys"),
            // Descending degree; ties broken by smaller demand first.
            NeObjective::Best => (tb.inv_risk_aversion(), ta.day_demand(), a)
                .partial_cmp(&(ta.inv_risk_aversion(), tb.day_demand(), b))
                .expect("finite keys"),
        };
        let _ = key_a;
        match objective {
            NeObjective::Worst => (ta.inv_risk_aversion(), tb.day_demand(), a)
                .partial_cmp(&(tb.inv_risk_aversion(), ta.day_demand(), b))
                .expect("finite keys"),
            NeObjective::Best => (tb.inv_risk_aversion(), ta.day_demand(), b)
                .partial_cmp(&(ta.inv_risk_aversion(), tb.day_demand(), a))
                .expect("finite keys"),
        }
    });

    let mut remaining = budget;
    for &l in &order {
        if remaining <= T::zero() {
            break;
        }
        let t = &instance.types()[l];
        let cap = t.weight() * t.day_demand();
        if cap <= T::zero() {
            continue;
        }
        let take = cap.min(remaining);
        p[l] = (take / cap).min(T::one());
        remaining = remaining - take;
    }
    (StrategyProfile::new(p).expect("probabilities in range"), false)
}

/// Full equilibrium analysis: classification, existence, demand and the
/// worst/best slice profiles.
pub fn solve<T: Scalar>(instance: &GameInstance<T>) -> EquilibriumReport<T> {
    let case = classify(instance);
    let m = instance.num_types();
    match &case {
        CaseLabel::Case1 | CaseLabel::Case3 => {
            let profile = StrategyProfile::all_res(m);
            EquilibriumReport {
                case,
                kind_per_type: vec![StrategyKind::DominantRes; m],
                ne_exists: true,
                common_slack: None,
                ne_demand: Some(instance.d_total()),
                worst_profile: Some(profile.clone()),
                best_profile: Some(profile),
                saturated: false,
            }
        }
        CaseLabel::Case2b => {
            let profile = StrategyProfile::all_nonres(m);
            EquilibriumReport {
                case,
                kind_per_type: vec![StrategyKind::DominantNonRes; m],
                ne_exists: true,
                common_slack: None,
                ne_demand: Some(T::zero()),
                worst_profile: Some(profile.clone()),
                best_profile: Some(profile),
                saturated: false,
            }
        }
        CaseLabel::Case2a | CaseLabel::Case2c { .. } | CaseLabel::Case4 { .. } => {
            let setup = mixed_setup(instance).expect("mixed regime");
            let mut kinds = vec![StrategyKind::Mixed; m];
            for &l in &setup.pinned_res {
                kinds[l] = StrategyKind::DominantRes;
            }
            for &l in &setup.pinned_nonres {
                kinds[l] = StrategyKind::DominantNonRes;
            }
            if setup.mixed.is_empty() {
                // All of sigma2 squeezed out: a pure dominant outcome.
                let mut p = vec![T::zero(); m];
                for &l in &setup.pinned_res {
                    p[l] = T::one();
                }
                let profile = StrategyProfile::new(p).expect("probabilities in range");
                return EquilibriumReport {
                    case,
                    kind_per_type: kinds,
                    ne_exists: true,
                    common_slack: None,
                    ne_demand: Some(setup.base_demand),
                    worst_profile: Some(profile.clone()),
                    best_profile: Some(profile),
                    saturated: false,
                };
            }
            match ne_exists_in(instance, &setup).expect("mixed nonempty") {
                None => EquilibriumReport {
                    case,
                    kind_per_type: kinds,
                    ne_exists: false,
                    common_slack: None,
                    ne_demand: None,
                    worst_profile: None,
                    best_profile: None,
                    saturated: false,
                },
                Some(slack) => {
                    let demand = setup.base_demand + mixed_demand(instance, &setup, slack);
                    let (worst, saturated) =
                        fill_slice(instance, &setup, slack, NeObjective::Worst);
                    let (best, _) = fill_slice(instance, &setup, slack, NeObjective::Best);
                    EquilibriumReport {
                        case,
                        kind_per_type: kinds,
                        ne_exists: true,
                        common_slack: Some(slack),
                        ne_demand: Some(demand),
                        worst_profile: Some(worst),
                        best_profile: Some(best),
                        saturated,
                    }
                }
            }
        }
    }
}

/// Demand a competing consumer of the given type expects to face:
/// `E + (N-1) * sum_l r_l E_l p_l`.
pub fn conditional_demand<T: Scalar>(
    instance: &GameInstance<T>,
    type_index: usize,
    profile: &StrategyProfile<T>,
) -> Result<T> {
    if profile.len() != instance.num_types() {
        return Err(Error::InvalidArgument(format!(
            "profile has {} entries but the instance has {} types",
            profile.len(),
            instance.num_types()
        )));
    }
    let t = instance.consumer_type(type_index)?;
    let opponents: T = instance
        .types()
        .iter()
        .zip(profile.probabilities())
        .map(|(u, &p)| u.weight() * u.day_demand() * p)
        .sum();
    Ok(t.day_demand() + (instance.population() - T::one()) * opponents)
}

/// Expected competing cost under the conditional demand (the form the
/// equilibrium conditions are stated in).
pub fn conditional_cost_res<T: Scalar>(
    instance: &GameInstance<T>,
    type_index: usize,
    profile: &StrategyProfile<T>,
) -> Result<T> {
    let demand = conditional_demand(instance, type_index, profile)?;
    let t = instance.consumer_type(type_index)?;
    let er = instance.res_capacity();
    let share = t.day_demand() * er / er.max(demand);
    let prices = instance.prices();
    Ok(share * prices.c_res() + (t.day_demand() - share) * prices.day_price())
}
