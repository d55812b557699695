//! Symbolic bookkeeping for towers of projectivized jet bundles.
//!
//! Line bundle classes on the level-k stage are written additively as a
//! pullback part (named generators with integer coefficients) plus a
//! weight vector (a_1, ..., a_k) collecting the tautological twists of the
//! intermediate levels. Everything here is exact integer or rational
//! arithmetic; the printable grammar is e.g. `detV + O(1,0,2) - 3A`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::rational::{rat_int, Rational};
use crate::Result;

/// Base dimension n, bundle rank r, tower height k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    n: usize,
    r: usize,
    k: usize,
}

impl TowerSpec {
    pub fn new(n: usize, r: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("base dimension must be >= 1"));
        }
        if r == 0 || r > n {
            return Err(Error::invalid(format!(
                "bundle rank must satisfy 1 <= r <= n, got r={r}, n={n}"
            )));
        }
        Ok(TowerSpec { n, r, k })
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn height(&self) -> usize {
        self.k
    }
}

/// Dimension of the level-k stage: n + k (r - 1).
pub fn dim_semple(spec: &TowerSpec) -> usize {
    spec.n + spec.k * (spec.r - 1)
}

/// Dimension of the weighted jet locus cut by ell independent conditions:
/// n + k r - 1 - ell.
pub fn dim_gg_locus(n: usize, k: usize, r: usize, ell: usize) -> Result<usize> {
    if n == 0 || k == 0 || r == 0 {
        return Err(Error::invalid("need n, k, r >= 1"));
    }
    if ell > k * r - 1 {
        return Err(Error::invalid(format!(
            "cut count {ell} exceeds the fiber dimension {}",
            k * r - 1
        )));
    }
    Ok(n + k * r - 1 - ell)
}

/// Tautological twist weights (a_1, ..., a_k) of a class on the level-k
/// stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    components: Vec<i64>,
}

impl WeightVector {
    pub fn new(components: Vec<i64>) -> Self {
        WeightVector { components }
    }

    pub fn constant(value: i64, k: usize) -> Self {
        WeightVector {
            components: vec![value; k],
        }
    }

    pub fn components(&self) -> &[i64] {
        &self.components
    }

    pub fn level(&self) -> usize {
        self.components.len()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O(")?;
        for (i, a) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// A line bundle class: pulled-back named generators plus a weight vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardClass {
    base: BTreeMap<String, i64>,
    weight: Vec<i64>,
}

fn valid_base_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if name == "O" {
        return false;
    }
    first.is_ascii_alphabetic()
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PicardClass {
    /// Canonicalizes by dropping zero coefficients. Generator names are
    /// ascii identifiers; `O` is reserved for the weight term.
    pub fn new(base: BTreeMap<String, i64>, weight: Vec<i64>) -> Result<Self> {
        for name in base.keys() {
            if !valid_base_name(name) {
                return Err(Error::invalid(format!("invalid generator name {name:?}")));
            }
        }
        let base = base.into_iter().filter(|(_, c)| *c != 0).collect();
        Ok(PicardClass { base, weight })
    }

    /// The zero class at a given level.
    pub fn zero(level: usize) -> Self {
        PicardClass {
            base: BTreeMap::new(),
            weight: vec![0; level],
        }
    }

    /// A single named generator at level 0.
    pub fn generator(name: &str) -> Result<Self> {
        Self::new(BTreeMap::from([(name.to_string(), 1)]), vec![])
    }

    pub fn base(&self) -> &BTreeMap<String, i64> {
        &self.base
    }

    pub fn weight(&self) -> WeightVector {
        WeightVector::new(self.weight.clone())
    }

    pub fn level(&self) -> usize {
        self.weight.len()
    }

    /// Tensor product = coefficientwise sum. Both classes must live on the
    /// same level; pull back first otherwise.
    pub fn tensor(&self, other: &PicardClass) -> Result<PicardClass> {
        if self.level() != other.level() {
            return Err(Error::mismatch(format!(
                "classes live on levels {} and {}; pull back first",
                self.level(),
                other.level()
            )));
        }
        let mut base = self.base.clone();
        for (name, c) in &other.base {
            *base.entry(name.clone()).or_insert(0) += c;
        }
        base.retain(|_, c| *c != 0);
        let weight = self
            .weight
            .iter()
            .zip(&other.weight)
            .map(|(a, b)| a + b)
            .collect();
        Ok(PicardClass { base, weight })
    }

    /// Integer multiple; `scaled(-1)` is the dual.
    pub fn scaled(&self, c: i64) -> PicardClass {
        if c == 0 {
            return PicardClass::zero(self.level());
        }
        PicardClass {
            base: self.base.iter().map(|(n, v)| (n.clone(), v * c)).collect(),
            weight: self.weight.iter().map(|a| a * c).collect(),
        }
    }
}

impl fmt::Display for PicardClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, &c) in &self.base {
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}{name}")?;
            }
        }
        if self.level() > 0 {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.weight())?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    rest: &'a str,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if let Some(stripped) = self.rest.strip_prefix(c) {
            self.rest = stripped;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<i64> {
        self.skip_ws();
        let negative = self.rest.starts_with('-');
        let digits_from = usize::from(negative);
        let end = self.rest[digits_from..]
            .find(|c: char| !c.is_ascii_digit())
            .map(|i| i + digits_from)
            .unwrap_or(self.rest.len());
        if end == digits_from {
            return None;
        }
        let value = self.rest[..end].parse().ok()?;
        self.rest = &self.rest[end..];
        Some(value)
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let end = self
            .rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest.len());
        if end == 0 || !self.rest.chars().next()?.is_ascii_alphabetic() {
            return None;
        }
        let (name, rest) = self.rest.split_at(end);
        self.rest = rest;
        Some(name)
    }

    fn done(&mut self) -> bool {
        self.skip_ws();
        self.rest.is_empty()
    }
}

impl FromStr for PicardClass {
    type Err = Error;

    /// Parses the additive grammar `term (('+'|'-') term)*` where a term
    /// is `[coef] name` or `[coef] O(a_1, ..., a_k)`; `0` is the zero
    /// class at level 0.
    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor { rest: s };
        let mut base: BTreeMap<String, i64> = BTreeMap::new();
        let mut weight: Option<Vec<i64>> = None;
        let mut sign = 1i64;
        if cur.eat('-') {
            sign = -1;
        }
        loop {
            cur.skip_ws();
            let coef = cur.integer().unwrap_or(1) * sign;
            if let Some(name) = cur.ident() {
                if name == "O" {
                    if !cur.eat('(') {
                        return Err(Error::invalid("expected ( after O"));
                    }
                    let mut comps = Vec::new();
                    if !cur.eat(')') {
                        loop {
                            let a = cur
                                .integer()
                                .ok_or_else(|| Error::invalid("expected integer weight"))?;
                            comps.push(a * coef);
                            if cur.eat(')') {
                                break;
                            }
                            if !cur.eat(',') {
                                return Err(Error::invalid("expected , or ) in weight vector"));
                            }
                        }
                    }
                    match &mut weight {
                        None => weight = Some(comps),
                        Some(acc) => {
                            if acc.len() != comps.len() {
                                return Err(Error::mismatch(
                                    "weight vectors of different levels in one class",
                                ));
                            }
                            for (a, b) in acc.iter_mut().zip(&comps) {
                                *a += b;
                            }
                        }
                    }
                } else {
                    if !valid_base_name(name) {
                        return Err(Error::invalid(format!("invalid generator name {name:?}")));
                    }
                    *base.entry(name.to_string()).or_insert(0) += coef;
                }
            } else if coef == 0 && sign == 1 {
                // A bare literal `0`: the zero class.
            } else {
                return Err(Error::invalid("expected a generator or weight term"));
            }
            if cur.done() {
                break;
            }
            if cur.eat('+') {
                sign = 1;
            } else if cur.eat('-') {
                sign = -1;
            } else {
                return Err(Error::invalid(format!(
                    "unexpected input at {:?}",
                    cur.rest
                )));
            }
        }
        PicardClass::new(base, weight.unwrap_or_default())
    }
}

/// The determinant class on the level-k stage in closed form:
/// the pullback of the base determinant generator plus the constant
/// weight vector (r-1, ..., r-1). Stored with coefficient +1 on `detV`.
pub fn det_vk_closed(spec: &TowerSpec) -> Result<PicardClass> {
    if spec.k == 0 {
        return Err(Error::invalid("closed form needs tower height k >= 1"));
    }
    PicardClass::new(
        BTreeMap::from([("detV".to_string(), 1)]),
        vec![spec.r as i64 - 1; spec.k],
    )
}

/// One step of the determinant recursion: pull the previous level back
/// (one more weight slot) and twist the new slot by r - 1.
pub fn det_vk_step(prev: &PicardClass, r: usize) -> Result<PicardClass> {
    if r == 0 {
        return Err(Error::invalid("bundle rank must be >= 1"));
    }
    let mut weight = prev.weight.clone();
    weight.push(r as i64 - 1);
    PicardClass::new(prev.base.clone(), weight)
}

/// Pulls a class back to a higher level by padding zero weights.
pub fn pullback_class(cls: &PicardClass, to_level: usize) -> Result<PicardClass> {
    if to_level < cls.level() {
        return Err(Error::invalid(format!(
            "cannot pull back from level {} down to {to_level}",
            cls.level()
        )));
    }
    let mut weight = cls.weight.clone();
    weight.resize(to_level, 0);
    PicardClass::new(cls.base.clone(), weight)
}

/// Weight vector of the p-th tautological twist on the level-k stage:
/// the constant vector -(p-1). For p = r it is dual to the closed-form
/// determinant weight.
pub fn tautological_twist(p: usize, k: usize, r: usize) -> Result<WeightVector> {
    if p == 0 || p > r {
        return Err(Error::invalid(format!(
            "twist index must satisfy 1 <= p <= r, got p={p}, r={r}"
        )));
    }
    Ok(WeightVector::constant(-(p as i64 - 1), k))
}

/// How a candidate rank sequence fails to be admissible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankViolation {
    Empty,
    NonPositive { index: usize, value: i64 },
    Increasing { index: usize },
    DropTooLarge { index: usize, drop: i64 },
    TopRankNotBelowAmbient { top: i64, ambient: i64 },
}

impl fmt::Display for RankViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankViolation::Empty => write!(f, "sequence is empty"),
            RankViolation::NonPositive { index, value } => {
                write!(f, "rank {value} at position {index} is not positive")
            }
            RankViolation::Increasing { index } => {
                write!(f, "rank increases from position {index} to {}", index + 1)
            }
            RankViolation::DropTooLarge { index, drop } => {
                write!(f, "rank drops by {drop} after position {index}")
            }
            RankViolation::TopRankNotBelowAmbient { top, ambient } => {
                write!(f, "top rank {top} must be below the ambient rank {ambient}")
            }
        }
    }
}

/// Checks a candidate rank sequence (r_0, ..., r_k): positive entries,
/// nonincreasing, drops of at most one per step; with
/// `proper_ambient = Some(r)` the final rank must additionally be < r.
/// Returns all violations; an admissible sequence gets an empty list.
pub fn validate_rank_sequence(ranks: &[i64], proper_ambient: Option<i64>) -> Vec<RankViolation> {
    let mut violations = Vec::new();
    if ranks.is_empty() {
        violations.push(RankViolation::Empty);
        return violations;
    }
    for (i, &r) in ranks.iter().enumerate() {
        if r <= 0 {
            violations.push(RankViolation::NonPositive { index: i, value: r });
        }
    }
    for (i, w) in ranks.windows(2).enumerate() {
        if w[1] > w[0] {
            violations.push(RankViolation::Increasing { index: i });
        } else if w[0] - w[1] > 1 {
            violations.push(RankViolation::DropTooLarge {
                index: i,
                drop: w[0] - w[1],
            });
        }
    }
    if let Some(ambient) = proper_ambient {
        let top = *ranks.last().expect("nonempty");
        if top >= ambient {
            violations.push(RankViolation::TopRankNotBelowAmbient { top, ambient });
        }
    }
    violations
}

/// An admissible rank sequence (r_0, ..., r_k): validated data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankSequence {
    ranks: Vec<i64>,
}

impl RankSequence {
    pub fn new(ranks: Vec<i64>) -> Result<Self> {
        let violations = validate_rank_sequence(&ranks, None);
        if let Some(first) = violations.first() {
            return Err(Error::invalid(format!(
                "inadmissible rank sequence: {first}"
            )));
        }
        Ok(RankSequence { ranks })
    }

    pub fn ranks(&self) -> &[i64] {
        &self.ranks
    }

    /// Number of steps k.
    pub fn steps(&self) -> usize {
        self.ranks.len() - 1
    }
}

/// Twist weights induced by a rank sequence: a_l = 2 r_{l-1} - r_l - 1
/// for l = 1..k. Admissibility makes every weight nonnegative (a constant
/// step gives r - 1, a unit drop gives the upper rank).
pub fn induced_weights(seq: &RankSequence) -> WeightVector {
    let components: Vec<i64> = seq
        .ranks
        .windows(2)
        .map(|w| 2 * w[0] - w[1] - 1)
        .collect();
    assert!(
        components.iter().all(|&a| a >= 0),
        "admissible sequences induce nonnegative weights"
    );
    WeightVector::new(components)
}

/// One rank identity of the structural exact sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankIdentity {
    pub label: &'static str,
    pub lhs: i64,
    pub rhs: i64,
}

impl RankIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Rank arithmetic of the two structural sequences at one tower step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerRankReport {
    pub identities: Vec<RankIdentity>,
}

impl EulerRankReport {
    pub fn all_hold(&self) -> bool {
        self.identities.iter().all(RankIdentity::holds)
    }
}

/// Checks that the bundle rank decomposes through both structural exact
/// sequences: r = 1 + (r - 1) on the tautological side and on the
/// relative tangent side.
pub fn euler_rank_check(spec: &TowerSpec) -> Result<EulerRankReport> {
    if spec.k == 0 {
        return Err(Error::invalid("rank identities live on levels k >= 1"));
    }
    let r = spec.r as i64;
    Ok(EulerRankReport {
        identities: vec![
            RankIdentity {
                label: "tautological line plus relative tangent",
                lhs: r,
                rhs: 1 + (r - 1),
            },
            RankIdentity {
                label: "twisted pullback splits off the line",
                lhs: r,
                rhs: (r - 1) + 1,
            },
        ],
    })
}

/// Ramification order of one boundary component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ramification {
    Finite(u64),
    Infinite,
}

impl FromStr for Ramification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "oo" | "∞" => Ok(Ramification::Infinite),
            other => {
                let m: u64 = other
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad ramification order {other:?}")))?;
                if m == 0 {
                    return Err(Error::invalid("ramification orders must be >= 1"));
                }
                Ok(Ramification::Finite(m))
            }
        }
    }
}

/// Orbifold boundary weights (1 - s/rho_j) clamped at 0; an infinite
/// order gives weight 1.
pub fn derived_orbifold_weights(rho: &[Ramification], s: u64) -> Result<Vec<Rational>> {
    if s == 0 {
        return Err(Error::invalid("need s >= 1"));
    }
    rho.iter()
        .map(|r| match r {
            Ramification::Infinite => Ok(rat_int(1)),
            Ramification::Finite(0) => Err(Error::invalid("ramification orders must be >= 1")),
            Ramification::Finite(m) => {
                let w = rat_int(1) - rat_int(s as i64) / rat_int(*m as i64);
                Ok(if w < rat_int(0) { rat_int(0) } else { w })
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn tower_dimension_frozen_case() {
        let spec = TowerSpec::new(3, 2, 4).unwrap();
        assert_eq!(dim_semple(&spec), 7);
        assert_eq!(dim_semple(&TowerSpec::new(3, 1, 9).unwrap()), 3);
        assert!(TowerSpec::new(2, 3, 1).is_err());
        assert!(TowerSpec::new(0, 1, 1).is_err());
    }

    #[test]
    fn locus_dimension_frozen_case() {
        assert_eq!(dim_gg_locus(2, 3, 2, 2).unwrap(), 5);
        assert_eq!(dim_gg_locus(1, 1, 1, 0).unwrap(), 1);
        assert!(dim_gg_locus(2, 3, 2, 6).is_err());
    }

    #[test]
    fn closed_form_determinant_weight_is_constant() {
        let spec = TowerSpec::new(4, 3, 2).unwrap();
        let det = det_vk_closed(&spec).unwrap();
        assert_eq!(det.weight().components(), &[2, 2]);
        assert_eq!(det.base().get("detV"), Some(&1));
        // Rank one: the twist degenerates to the pullback alone.
        let flat = det_vk_closed(&TowerSpec::new(4, 1, 3).unwrap()).unwrap();
        assert_eq!(flat.weight().components(), &[0, 0, 0]);
    }

    #[test]
    fn stepping_the_determinant_reproduces_the_closed_form() {
        for r in 1..=4 {
            let mut cls = PicardClass::generator("detV").unwrap();
            for k in 1..=6 {
                cls = det_vk_step(&cls, r).unwrap();
                let closed = det_vk_closed(&TowerSpec::new(5, r, k).unwrap()).unwrap();
                assert_eq!(cls, closed, "r={r}, k={k}");
            }
        }
    }

    #[test]
    fn pullback_pads_zeros_and_rejects_descent() {
        let cls = PicardClass::from_str("detV + O(1,2)").unwrap();
        let lifted = pullback_class(&cls, 4).unwrap();
        assert_eq!(lifted.weight().components(), &[1, 2, 0, 0]);
        assert!(pullback_class(&cls, 1).is_err());
    }

    #[test]
    fn twist_weights_frozen_cases() {
        assert_eq!(tautological_twist(1, 3, 2).unwrap().components(), &[0, 0, 0]);
        assert_eq!(tautological_twist(2, 2, 2).unwrap().components(), &[-1, -1]);
        assert!(tautological_twist(0, 2, 2).is_err());
        assert!(tautological_twist(3, 2, 2).is_err());
    }

    #[test]
    fn top_twist_is_dual_to_the_determinant_weight() {
        for r in 1..=5 {
            for k in 1..=6 {
                let spec = TowerSpec::new(6, r, k).unwrap();
                let det = det_vk_closed(&spec).unwrap();
                let twist = tautological_twist(r, k, r).unwrap();
                let sum: Vec<i64> = det
                    .weight()
                    .components()
                    .iter()
                    .zip(twist.components())
                    .map(|(a, b)| a + b)
                    .collect();
                assert!(sum.iter().all(|&a| a == 0), "r={r}, k={k}");
            }
        }
    }

    #[test]
    fn induced_weights_frozen_cases() {
        let seq = RankSequence::new(vec![2, 2, 1]).unwrap();
        assert_eq!(induced_weights(&seq).components(), &[1, 2]);
        let seq = RankSequence::new(vec![3, 2, 2]).unwrap();
        assert_eq!(induced_weights(&seq).components(), &[3, 1]);
    }

    #[test]
    fn rank_sequence_validation_reports_structured_violations() {
        assert_eq!(validate_rank_sequence(&[2, 2, 1], None), vec![]);
        assert_eq!(
            validate_rank_sequence(&[2, 1, 2], None),
            vec![RankViolation::Increasing { index: 1 }]
        );
        assert_eq!(
            validate_rank_sequence(&[3, 1], None),
            vec![RankViolation::DropTooLarge { index: 0, drop: 2 }]
        );
        assert_eq!(validate_rank_sequence(&[], None), vec![RankViolation::Empty]);
        assert_eq!(
            validate_rank_sequence(&[2, 0], None),
            vec![
                RankViolation::NonPositive { index: 1, value: 0 },
                RankViolation::DropTooLarge { index: 0, drop: 2 },
            ]
        );
        // A proper top stage must sit strictly below the ambient rank.
        assert_eq!(
            validate_rank_sequence(&[3, 3, 3], Some(3)),
            vec![RankViolation::TopRankNotBelowAmbient { top: 3, ambient: 3 }]
        );
        assert_eq!(validate_rank_sequence(&[3, 3, 2], Some(3)), vec![]);
        assert!(RankSequence::new(vec![2, 1, 2]).is_err());
    }

    #[test]
    fn euler_rank_identities_hold() {
        for r in 1..=6 {
            let report = euler_rank_check(&TowerSpec::new(6, r, 2).unwrap()).unwrap();
            assert!(report.all_hold(), "r={r}");
        }
        assert!(euler_rank_check(&TowerSpec::new(6, 2, 0).unwrap()).is_err());
    }

    #[test]
    fn orbifold_weights_frozen_cases() {
        let w = derived_orbifold_weights(
            &[Ramification::Finite(2), Ramification::Finite(3)],
            1,
        )
        .unwrap();
        assert_eq!(w, vec![rat(1, 2), rat(2, 3)]);
        let w = derived_orbifold_weights(&[Ramification::Infinite], 7).unwrap();
        assert_eq!(w, vec![rat_int(1)]);
        // Orders at or below s clamp to zero.
        let w = derived_orbifold_weights(&[Ramification::Finite(3)], 5).unwrap();
        assert_eq!(w, vec![rat_int(0)]);
        assert!(derived_orbifold_weights(&[Ramification::Finite(2)], 0).is_err());
        assert!("0".parse::<Ramification>().is_err());
        assert_eq!("inf".parse::<Ramification>().unwrap(), Ramification::Infinite);
    }

    #[test]
    fn class_grammar_round_trips_the_example() {
        let cls: PicardClass = "detV + O(1,0,2) - 3A".parse().unwrap();
        assert_eq!(cls.base().get("detV"), Some(&1));
        assert_eq!(cls.base().get("A"), Some(&-3));
        assert_eq!(cls.weight().components(), &[1, 0, 2]);
        let printed = cls.to_string();
        assert_eq!(printed, "-3A + detV + O(1,0,2)");
        assert_eq!(printed.parse::<PicardClass>().unwrap(), cls);
        assert_eq!("0".parse::<PicardClass>().unwrap(), PicardClass::zero(0));
        assert!("O(1".parse::<PicardClass>().is_err());
        assert!("detV ++ A".parse::<PicardClass>().is_err());
        assert!("2O".parse::<PicardClass>().is_err());
    }

    #[test]
    fn tensor_adds_and_requires_matching_levels() {
        let a: PicardClass = "detV + O(1,0)".parse().unwrap();
        let b: PicardClass = "A - detV + O(0,2)".parse().unwrap();
        let sum = a.tensor(&b).unwrap();
        assert_eq!(sum.to_string(), "A + O(1,2)");
        let c: PicardClass = "A + O(1)".parse().unwrap();
        assert!(a.tensor(&c).is_err());
        assert_eq!(a.scaled(-1).to_string(), "-detV + O(-1,0)");
        assert_eq!(a.scaled(0), PicardClass::zero(2));
    }

    proptest! {
        /// Pulling back is additive: lift-then-add equals add-then-lift.
        #[test]
        fn pullback_commutes_with_tensor(
            w1 in proptest::collection::vec(-5i64..=5, 0..4),
            w2 in proptest::collection::vec(-5i64..=5, 0..4),
            c1 in -4i64..=4,
            c2 in -4i64..=4,
            pad in 0usize..3,
        ) {
            let level = w1.len().max(w2.len());
            let a = pullback_class(
                &PicardClass::new(BTreeMap::from([("A".into(), c1)]), w1).unwrap(),
                level,
            ).unwrap();
            let b = pullback_class(
                &PicardClass::new(BTreeMap::from([("B".into(), c2)]), w2).unwrap(),
                level,
            ).unwrap();
            let target = level + pad;
            let lifted_sum = pullback_class(&a.tensor(&b).unwrap(), target).unwrap();
            let sum_lifted = pullback_class(&a, target)
                .unwrap()
                .tensor(&pullback_class(&b, target).unwrap())
                .unwrap();
            prop_assert_eq!(lifted_sum, sum_lifted);
        }

        /// Display and parse are mutually inverse on canonical classes.
        #[test]
        fn class_grammar_round_trips(
            coeffs in proptest::collection::btree_map(
                "[A-NP-Z][a-z0-9_]{0,3}", -9i64..=9, 0..4,
            ),
            weight in proptest::collection::vec(-9i64..=9, 0..5),
        ) {
            let cls = PicardClass::new(coeffs, weight).unwrap();
            let printed = cls.to_string();
            let reparsed: PicardClass = printed.parse().unwrap();
            prop_assert_eq!(reparsed, cls);
        }
    }
}
