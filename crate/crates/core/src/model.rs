//! Game data types and the mean-field cost model.
//!
//! A game instance fixes the community size, the renewable capacity, the
//! three energy prices and the consumer-type distribution. Strategies are
//! per-type probabilities of competing for the renewable pool; demand,
//! proportional allocation, per-strategy costs and the social cost are all
//! pure functions of a profile and an instance.

use crate::scalar::approx_eq_rel;
use crate::{Error, Result, Scalar};

/// Energy prices: renewable base price plus the night and day-peak
/// multipliers.
///
/// Day-peak energy costs `gamma * c_res`, night base-load energy costs
/// `beta * c_res`, with `gamma > beta > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceSchedule<T> {
    c_res: T,
    beta: T,
    gamma: T,
}

impl<T: Scalar> PriceSchedule<T> {
    pub fn new(c_res: T, beta: T, gamma: T) -> Result<Self> {
        if !(c_res > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "c_res must be positive, got {c_res}"
            )));
        }
        if !(beta > T::one()) {
            return Err(Error::InvalidArgument(format!(
                "beta must exceed 1, got {beta}"
            )));
        }
        if !(gamma > beta) {
            return Err(Error::InvalidArgument(format!(
                "gamma must exceed beta, got gamma={gamma}, beta={beta}"
            )));
        }
        Ok(Self { c_res, beta, gamma })
    }

    pub fn c_res(&self) -> T {
        self.c_res
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// Day-peak price `gamma * c_res`.
    pub fn day_price(&self) -> T {
        self.gamma * self.c_res
    }

    /// Night base-load price `beta * c_res`.
    pub fn night_price(&self) -> T {
        self.beta * self.c_res
    }
}

/// One consumer type: day-time demand `E`, inverse risk aversion degree
/// `epsilon >= 1` and the probability `r` that a consumer is of this type.
///
/// A type's full load is `epsilon * E`; only `E` of it is risked during the
/// day when competing. `epsilon = 1` is a risk-seeking consumer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsumerType<T> {
    index: usize,
    day_demand: T,
    inv_risk_aversion: T,
    weight: T,
}

impl<T: Scalar> ConsumerType<T> {
    /// The index is assigned by [`GameInstance::new`] after canonical
    /// ordering; fresh types start at 0.
    pub fn new(day_demand: T, inv_risk_aversion: T, weight: T) -> Result<Self> {
        if !(day_demand > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "day_demand must be positive, got {day_demand}"
            )));
        }
        if !(inv_risk_aversion >= T::one()) {
            return Err(Error::InvalidArgument(format!(
                "inv_risk_aversion must be at least 1, got {inv_risk_aversion}"
            )));
        }
        if !(weight >= T::zero() && weight <= T::one()) {
            return Err(Error::InvalidArgument(format!(
                "weight must lie in [0, 1], got {weight}"
            )));
        }
        Ok(Self {
            index: 0,
            day_demand,
            inv_risk_aversion,
            weight,
        })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Day-time energy demand `E`.
    pub fn day_demand(&self) -> T {
        self.day_demand
    }

    /// Inverse risk aversion degree `epsilon`.
    pub fn inv_risk_aversion(&self) -> T {
        self.inv_risk_aversion
    }

    /// Type probability `r`.
    pub fn weight(&self) -> T {
        self.weight
    }

    /// Risk aversion degree `mu = 1 / epsilon`.
    pub fn risk_aversion(&self) -> T {
        T::one() / self.inv_risk_aversion
    }

    /// Full load profile `U = epsilon * E`, engaged at night when not
    /// competing.
    pub fn full_profile(&self) -> T {
        self.inv_risk_aversion * self.day_demand
    }
}

/// Immutable description of one community game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameInstance<T> {
    n_consumers: u32,
    res_capacity: T,
    prices: PriceSchedule<T>,
    types: Vec<ConsumerType<T>>,
}

impl<T: Scalar> GameInstance<T> {
    /// Builds an instance, canonicalizing the type list (sorted by demand
    /// ascending, ties by inverse risk aversion ascending) and normalizing
    /// weights. Weights whose sum is off by more than 1e-9 are rejected.
    pub fn new(
        n_consumers: u32,
        res_capacity: T,
        prices: PriceSchedule<T>,
        mut types: Vec<ConsumerType<T>>,
    ) -> Result<Self> {
        if n_consumers < 2 {
            return Err(Error::InvalidArgument(format!(
                "n_consumers must be at least 2, got {n_consumers}"
            )));
        }
        if !(res_capacity > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "res_capacity must be positive, got {res_capacity}"
            )));
        }
        if types.is_empty() {
            return Err(Error::InvalidArgument("at least one consumer type".into()));
        }
        if types.len() > n_consumers as usize {
            return Err(Error::InvalidArgument(format!(
                "more types ({}) than consumers ({n_consumers})",
                types.len()
            )));
        }
        let sum: T = types.iter().map(|t| t.weight).sum();
        if !approx_eq_rel(sum, T::one(), T::rel_tolerance()) {
            return Err(Error::InvalidArgument(format!(
                "type weights must sum to 1 within 1e-9, got {sum}"
            )));
        }
        for t in &mut types {
            t.weight = t.weight / sum;
        }
        types.sort_by(|a, b| {
            (a.day_demand, a.inv_risk_aversion)
                .partial_cmp(&(b.day_demand, b.inv_risk_aversion))
                .expect("type fields are finite")
        });
        for (index, t) in types.iter_mut().enumerate() {
            t.index = index;
        }
        Ok(Self {
            n_consumers,
            res_capacity,
            prices,
            types,
        })
    }

    pub fn n_consumers(&self) -> u32 {
        self.n_consumers
    }

    /// `N` as a scalar, for demand arithmetic.
    pub fn population(&self) -> T {
        T::from_u32(self.n_consumers).expect("u32 fits any Scalar")
    }

    pub fn res_capacity(&self) -> T {
        self.res_capacity
    }

    pub fn prices(&self) -> &PriceSchedule<T> {
        &self.prices
    }

    pub fn types(&self) -> &[ConsumerType<T>] {
        &self.types
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn consumer_type(&self, type_index: usize) -> Result<&ConsumerType<T>> {
        self.types.get(type_index).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "type index {type_index} out of range for {} types",
                self.types.len()
            ))
        })
    }

    fn check_profile(&self, profile: &StrategyProfile<T>) -> Result<()> {
        if profile.len() != self.types.len() {
            return Err(Error::InvalidArgument(format!(
                "profile has {} entries but the instance has {} types",
                profile.len(),
                self.types.len()
            )));
        }
        Ok(())
    }

    /// Expected aggregate demand for the renewable pool,
    /// `D(p) = N * sum_l r_l * p_l * E_l`.
    pub fn aggregate_demand(&self, profile: &StrategyProfile<T>) -> Result<T> {
        self.check_profile(profile)?;
        let per_consumer: T = self
            .types
            .iter()
            .zip(profile.probabilities())
            .map(|(t, &p)| t.weight * p * t.day_demand)
            .sum();
        Ok(self.population() * per_consumer)
    }

    /// Maximum expected aggregate demand, `D_total = N * sum_l r_l * E_l`
    /// (everyone competes).
    pub fn d_total(&self) -> T {
        let per_consumer: T = self
            .types
            .iter()
            .map(|t| t.weight * t.day_demand)
            .sum();
        self.population() * per_consumer
    }

    /// Proportional-allocation share for a competing consumer of the given
    /// type: `E * ER / max(ER, D(p))`. Always in `(0, E]`.
    pub fn allocation_pa(&self, type_index: usize, profile: &StrategyProfile<T>) -> Result<T> {
        let demand = self.aggregate_demand(profile)?;
        let t = self.consumer_type(type_index)?;
        Ok(t.day_demand * self.res_capacity / self.res_capacity.max(demand))
    }

    /// Expected cost of competing: the allocated share at the renewable
    /// price plus the shortfall at the day-peak price.
    pub fn cost_res(&self, type_index: usize, profile: &StrategyProfile<T>) -> Result<T> {
        let share = self.allocation_pa(type_index, profile)?;
        let t = self.consumer_type(type_index)?;
        Ok(share * self.prices.c_res() + (t.day_demand - share) * self.prices.day_price())
    }

    /// Cost of sitting out: the full load at the night price,
    /// `epsilon * E * beta * c_res`. Independent of the profile.
    pub fn cost_nonres(&self, type_index: usize) -> Result<T> {
        let t = self.consumer_type(type_index)?;
        Ok(t.full_profile() * self.prices.night_price())
    }

    /// Expected social cost of a profile, split into its renewable,
    /// day-peak and night components.
    pub fn social_cost(&self, profile: &StrategyProfile<T>) -> Result<SocialCostBreakdown<T>> {
        let demand = self.aggregate_demand(profile)?;
        let res_cost = self.res_capacity.min(demand) * self.prices.c_res();
        let day_peak_cost = (demand - self.res_capacity).max(T::zero()) * self.prices.day_price();
        let night_load: T = self
            .types
            .iter()
            .zip(profile.probabilities())
            .map(|(t, &p)| t.weight * (T::one() - p) * t.full_profile())
            .sum();
        let night_cost = self.population() * night_load * self.prices.night_price();
        Ok(SocialCostBreakdown::new(res_cost, day_peak_cost, night_cost))
    }
}

/// Mixed strategy: one probability of competing per consumer type.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile<T> {
    p_res: Vec<T>,
}

impl<T: Scalar> StrategyProfile<T> {
    pub fn new(p_res: Vec<T>) -> Result<Self> {
        if p_res.is_empty() {
            return Err(Error::InvalidArgument("empty strategy profile".into()));
        }
        for (i, &p) in p_res.iter().enumerate() {
            if !(p >= T::zero() && p <= T::one()) {
                return Err(Error::InvalidArgument(format!(
                    "probability {p} at index {i} is outside [0, 1]"
                )));
            }
        }
        Ok(Self { p_res })
    }

    /// Every type competes with probability one.
    pub fn all_res(num_types: usize) -> Self {
        Self {
            p_res: vec![T::one(); num_types],
        }
    }

    /// Every type stays at night.
    pub fn all_nonres(num_types: usize) -> Self {
        Self {
            p_res: vec![T::zero(); num_types],
        }
    }

    pub fn len(&self) -> usize {
        self.p_res.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_res.is_empty()
    }

    pub fn probabilities(&self) -> &[T] {
        &self.p_res
    }

    /// Probability of competing for the renewable pool.
    pub fn p_res(&self, type_index: usize) -> T {
        self.p_res[type_index]
    }

    /// Complementary probability of engaging at night.
    pub fn p_nonres(&self, type_index: usize) -> T {
        T::one() - self.p_res[type_index]
    }
}

/// Social cost split into its three summands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SocialCostBreakdown<T> {
    pub res_cost: T,
    pub day_peak_cost: T,
    pub night_cost: T,
    pub total: T,
}

impl<T: Scalar> SocialCostBreakdown<T> {
    fn new(res_cost: T, day_peak_cost: T, night_cost: T) -> Self {
        Self {
            res_cost,
            day_peak_cost,
            night_cost,
            total: res_cost + day_peak_cost + night_cost,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Inst = GameInstance<f64>;

    fn prices(c: f64, beta: f64, gamma: f64) -> PriceSchedule<f64> {
        PriceSchedule::new(c, beta, gamma).unwrap()
    }

    fn ty(e: f64, eps: f64, r: f64) -> ConsumerType<f64> {
        ConsumerType::new(e, eps, r).unwrap()
    }

    /// Five-type residential community; weights and demands as in the
    /// household study fixture.
    fn residential(res_capacity: f64) -> Inst {
        let types = vec![
            ty(2.0, 1.0, 0.20),
            ty(3.0, 1.0, 0.40),
            ty(5.0, 1.0, 0.30),
            ty(10.0, 1.0, 0.07),
            ty(15.0, 1.0, 0.03),
        ];
        Inst::new(1000, res_capacity, prices(1.0, 2.0, 3.0), types).unwrap()
    }

    fn two_type_fig3(res_capacity: f64, eps0: f64, eps1: f64) -> Inst {
        let types = vec![ty(100.0, eps0, 0.3), ty(180.0, eps1, 0.7)];
        Inst::new(500, res_capacity, prices(0.3, 5.0, 10.0), types).unwrap()
    }

    #[test]
    fn price_schedule_rejects_bad_order() {
        assert!(PriceSchedule::new(1.0, 2.0, 3.0).is_ok());
        assert!(PriceSchedule::new(0.0, 2.0, 3.0).is_err());
        assert!(PriceSchedule::new(1.0, 1.0, 3.0).is_err());
        assert!(PriceSchedule::new(1.0, 3.0, 3.0).is_err());
        let p = prices(0.3, 5.0, 10.0);
        assert_eq!(p.day_price(), 3.0);
        assert_eq!(p.night_price(), 1.5);
    }

    #[test]
    fn consumer_type_guards() {
        assert!(ConsumerType::new(0.0, 1.0, 0.5).is_err());
        assert!(ConsumerType::new(1.0, 0.9, 0.5).is_err());
        assert!(ConsumerType::new(1.0, 1.0, 1.1).is_err());
        let t = ty(4.0, 2.0, 0.5);
        assert_eq!(t.full_profile(), 8.0);
        assert_eq!(t.risk_aversion(), 0.5);
    }

    #[test]
    fn instance_normalizes_and_sorts() {
        let types = vec![ty(5.0, 1.2, 0.5), ty(2.0, 1.0, 0.5)];
        let inst = Inst::new(10, 4.0, prices(1.0, 2.0, 3.0), types).unwrap();
        assert_eq!(inst.types()[0].day_demand(), 2.0);
        assert_eq!(inst.types()[1].day_demand(), 5.0);
        assert_eq!(inst.types()[0].index(), 0);
        assert_eq!(inst.types()[1].index(), 1);

        let bad = vec![ty(5.0, 1.2, 0.5), ty(2.0, 1.0, 0.4)];
        assert!(Inst::new(10, 4.0, prices(1.0, 2.0, 3.0), bad).is_err());

        assert!(Inst::new(1, 4.0, prices(1.0, 2.0, 3.0), vec![ty(1.0, 1.0, 1.0)]).is_err());
    }

    #[test]
    fn aggregate_demand_table1_all_ones() {
        let inst = residential(2125.0);
        let all = StrategyProfile::all_res(5);
        let d = inst.aggregate_demand(&all).unwrap();
        assert!((d - 4250.0).abs() <= 1e-9 * 4250.0);
        assert!((inst.d_total() - 4250.0).abs() <= 1e-9 * 4250.0);
    }

    #[test]
    fn aggregate_demand_zero_profile() {
        let inst = residential(2125.0);
        let none = StrategyProfile::all_nonres(5);
        assert_eq!(inst.aggregate_demand(&none).unwrap(), 0.0);
    }

    #[test]
    fn aggregate_demand_two_type() {
        let inst = two_type_fig3(10.0, 1.0, 1.0);
        let d = inst.aggregate_demand(&StrategyProfile::all_res(2)).unwrap();
        assert!((d - 78000.0).abs() <= 1e-9 * 78000.0);
        assert!((inst.d_total() - 78000.0).abs() <= 1e-9 * 78000.0);
    }

    #[test]
    fn d_total_single_type() {
        let inst = Inst::new(
            10,
            5.0,
            prices(1.0, 2.0, 3.0),
            vec![ty(1.0, 1.0, 1.0)],
        )
        .unwrap();
        assert_eq!(inst.d_total(), 10.0);
    }

    #[test]
    fn aggregate_demand_dimension_mismatch() {
        let inst = residential(2125.0);
        let short = StrategyProfile::all_res(3);
        assert!(matches!(
            inst.aggregate_demand(&short),
            Err(Error::InvalidArgument(_))
        ));
    }

    /// Single-type instance whose demand at `p` is easy to steer:
    /// `N = 10`, `E` chosen so `D(all_res) = 10 E`.
    fn single(e: f64, er: f64, c: f64, beta: f64, gamma: f64, eps: f64) -> Inst {
        Inst::new(10, er, prices(c, beta, gamma), vec![ty(e, eps, 1.0)]).unwrap()
    }

    #[test]
    fn allocation_pa_examples() {
        // D = 8 <= ER = 10: full demand granted.
        let inst = single(5.0, 10.0, 1.0, 2.0, 3.0, 1.0);
        let p = StrategyProfile::new(vec![0.16]).unwrap(); // D = 10*0.16*5 = 8
        assert_eq!(inst.allocation_pa(0, &p).unwrap(), 5.0);

        // D = 20 > ER = 10: share halves.
        let p = StrategyProfile::new(vec![0.4]).unwrap(); // D = 20
        assert_eq!(inst.allocation_pa(0, &p).unwrap(), 2.5);

        // Heavily oversubscribed pool.
        let inst = Inst::new(
            500,
            10.0,
            prices(1.0, 2.0, 3.0),
            vec![ty(100.0, 1.0, 1.0)],
        )
        .unwrap();
        let p = StrategyProfile::all_res(1); // D = 50000
        assert!((inst.allocation_pa(0, &p).unwrap() - 0.02).abs() < 1e-15);
    }

    #[test]
    fn cost_res_examples() {
        // rse = 2.5 on E = 5 with gamma = 3: 2.5 + 7.5 = 10.
        let inst = single(5.0, 10.0, 1.0, 2.0, 3.0, 1.0);
        let p = StrategyProfile::new(vec![0.4]).unwrap(); // D = 20, rse = 2.5
        assert_eq!(inst.cost_res(0, &p).unwrap(), 10.0);

        // D <= ER: pure renewable cost E * c.
        let p = StrategyProfile::new(vec![0.1]).unwrap(); // D = 5
        assert_eq!(inst.cost_res(0, &p).unwrap(), 5.0);

        // Starved allocation approaches the all-peak cost E * gamma * c.
        let inst = Inst::new(
            1_000_000,
            1.0,
            prices(1.0, 2.0, 3.0),
            vec![ty(5.0, 1.0, 1.0)],
        )
        .unwrap();
        let p = StrategyProfile::all_res(1);
        let cost = inst.cost_res(0, &p).unwrap();
        assert!(cost <= 15.0 && cost > 14.99);
    }

    #[test]
    fn cost_nonres_examples() {
        let inst = Inst::new(
            10,
            5.0,
            prices(0.3, 5.0, 10.0),
            vec![ty(100.0, 1.0, 1.0)],
        )
        .unwrap();
        assert!((inst.cost_nonres(0).unwrap() - 150.0).abs() < 1e-12);

        let inst = single(1.0, 5.0, 1.0, 2.0, 3.0, 1.0);
        assert_eq!(inst.cost_nonres(0).unwrap(), 2.0);
    }

    #[test]
    fn social_cost_examples() {
        let inst = single(1.0, 5.0, 1.0, 2.0, 3.0, 1.0);

        // p = 0.5: D = 5 = ER exactly.
        let sc = inst
            .social_cost(&StrategyProfile::new(vec![0.5]).unwrap())
            .unwrap();
        assert_eq!(
            (sc.res_cost, sc.day_peak_cost, sc.night_cost, sc.total),
            (5.0, 0.0, 10.0, 15.0)
        );

        // Pure night profile.
        let sc = inst.social_cost(&StrategyProfile::all_nonres(1)).unwrap();
        assert_eq!(
            (sc.res_cost, sc.day_peak_cost, sc.night_cost, sc.total),
            (0.0, 0.0, 20.0, 20.0)
        );

        // Everyone competes: D = 10, peak on the 5 units above capacity.
        let sc = inst.social_cost(&StrategyProfile::all_res(1)).unwrap();
        assert_eq!(
            (sc.res_cost, sc.day_peak_cost, sc.night_cost, sc.total),
            (5.0, 15.0, 0.0, 20.0)
        );
    }

    #[test]
    fn profile_guards() {
        assert!(StrategyProfile::<f64>::new(vec![]).is_err());
        assert!(StrategyProfile::new(vec![1.1]).is_err());
        assert!(StrategyProfile::new(vec![-0.1]).is_err());
        let p = StrategyProfile::new(vec![0.25, 1.0]).unwrap();
        assert_eq!(p.p_nonres(0), 0.75);
        assert_eq!(p.p_res(1), 1.0);
    }
}
