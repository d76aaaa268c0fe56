//! Sparse truncated multivariate power series over exact rationals.
//!
//! A `TruncSeries` is a finite map from exponent vectors to nonzero `Rat`
//! coefficients, together with a per-variable cap up to which the series is
//! certified correct. Caps are data, not global configuration: binary
//! operations propagate validity as the componentwise minimum, so a stale
//! truncation can never masquerade as an exact coefficient.
//!
//! Exponent vectors are stored sparsely (index, exponent) because some
//! contexts carry unbounded variable families (`p_1, p_2, ...`). Negative
//! exponents are permitted only as the bounded Laurent tail used by
//! [`TruncSeries::residue`]; caps bound the positive side of every variable.
//!
//! Invariants:
//! - no stored zero coefficients (pruned on insertion),
//! - no stored term exceeds any variable cap,
//! - variable names are unique within a context.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::rat::Rat;

/// A formal variable together with its integer grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    pub degree: i64,
}

impl VarSpec {
    pub fn new(name: &str, degree: i64) -> Self {
        VarSpec { name: name.to_string(), degree }
    }
}

/// Sparse exponent vector: sorted `(variable index, nonzero exponent)` pairs.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Expo(Vec<(u16, i32)>);

impl Expo {
    pub fn unit() -> Self {
        Expo(Vec::new())
    }

    pub fn of(pairs: &[(usize, i32)]) -> Self {
        let mut v: Vec<(u16, i32)> = pairs
            .iter()
            .filter(|&&(_, e)| e != 0)
            .map(|&(i, e)| (i as u16, e))
            .collect();
        v.sort_unstable_by_key(|&(i, _)| i);
        for w in v.windows(2) {
            assert!(w[0].0 != w[1].0, "duplicate variable index in exponent");
        }
        Expo(v)
    }

    pub fn get(&self, var: usize) -> i32 {
        match self.0.binary_search_by_key(&(var as u16), |&(i, _)| i) {
            Ok(pos) => self.0[pos].1,
            Err(_) => 0,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.0.iter().map(|&(i, e)| (i as usize, e))
    }

    /// Componentwise sum (monomial product).
    pub fn add(&self, other: &Expo) -> Expo {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(ia, ea)), Some(&(ib, eb))) => match ia.cmp(&ib) {
                    Ordering::Less => {
                        out.push((ia, ea));
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push((ib, eb));
                        j += 1;
                    }
                    Ordering::Equal => {
                        if ea + eb != 0 {
                            out.push((ia, ea + eb));
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (Some(&p), None) => {
                    out.push(p);
                    i += 1;
                }
                (None, Some(&p)) => {
                    out.push(p);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Expo(out)
    }

    /// Replace the exponent of `var` (0 removes it).
    pub fn with(&self, var: usize, exp: i32) -> Expo {
        let mut v: Vec<(u16, i32)> =
            self.0.iter().copied().filter(|&(i, _)| i as usize != var).collect();
        if exp != 0 {
            v.push((var as u16, exp));
            v.sort_unstable_by_key(|&(i, _)| i);
        }
        Expo(v)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }
}

/// Orders as the dense exponent vector would order lexicographically.
impl Ord for Expo {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, ea)), None) => return ea.cmp(&0),
                (None, Some(&(_, eb))) => return 0.cmp(&eb),
                (Some(&(ia, ea)), Some(&(ib, eb))) => match ia.cmp(&ib) {
                    // The smaller index is implicitly zero on the other side.
                    Ordering::Less => match ea.cmp(&0) {
                        Ordering::Equal => i += 1,
                        ord => return ord,
                    },
                    Ordering::Greater => match 0.cmp(&eb) {
                        Ordering::Equal => j += 1,
                        ord => return ord,
                    },
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Expo {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesError {
    ContextMismatch,
    UnknownVariable(String),
    NonzeroConstantTerm,
    NotNilpotent,
    Parse(String),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::ContextMismatch => write!(f, "incompatible variable contexts"),
            SeriesError::UnknownVariable(v) => write!(f, "unknown variable {v}"),
            SeriesError::NonzeroConstantTerm => write!(f, "nonzero constant term"),
            SeriesError::NotNilpotent => {
                write!(f, "argument has a term with no positive capped exponent")
            }
            SeriesError::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl std::error::Error for SeriesError {}

/// Sparse truncated power series. Immutable value semantics: every operation
/// returns a fresh series, so values are freely shared across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    vars: Arc<Vec<VarSpec>>,
    caps: Vec<i32>,
    terms: BTreeMap<Expo, Rat>,
}

impl TruncSeries {
    pub fn zero(vars: Vec<VarSpec>, caps: Vec<i32>) -> Self {
        assert_eq!(vars.len(), caps.len(), "one cap per variable");
        let mut names: Vec<&str> = vars.iter().map(|v| v.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), vars.len(), "variable names must be unique");
        TruncSeries { vars: Arc::new(vars), caps, terms: BTreeMap::new() }
    }

    pub fn zero_like(other: &TruncSeries) -> Self {
        TruncSeries {
            vars: other.vars.clone(),
            caps: other.caps.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vec<VarSpec>, caps: Vec<i32>, c: Rat) -> Self {
        let mut s = Self::zero(vars, caps);
        s.add_term(Expo::unit(), c);
        s
    }

    pub fn one(vars: Vec<VarSpec>, caps: Vec<i32>) -> Self {
        Self::constant(vars, caps, Rat::one())
    }

    /// The monomial `c * prod v_i^{e_i}`.
    pub fn monomial(&self, pairs: &[(usize, i32)], c: Rat) -> Self {
        let mut s = Self::zero_like(self);
        s.add_term(Expo::of(pairs), c);
        s
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn caps(&self) -> &[i32] {
        &self.caps
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Rat)> {
        self.terms.iter()
    }

    fn within_caps(caps: &[i32], e: &Expo) -> bool {
        e.pairs().all(|(i, exp)| exp <= caps[i])
    }

    /// Add `c` to the coefficient of `e`, pruning zeros and anything past the
    /// caps.
    pub fn add_term(&mut self, e: Expo, c: Rat) {
        if c.is_zero() || !Self::within_caps(&self.caps, &e) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn coeff(&self, e: &Expo) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff_of(&self, pairs: &[(usize, i32)]) -> Rat {
        self.coeff(&Expo::of(pairs))
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Expo::unit())
    }

    fn same_context(&self, other: &TruncSeries) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || *self.vars == *other.vars
    }

    fn min_caps(&self, other: &TruncSeries) -> Vec<i32> {
        self.caps.iter().zip(&other.caps).map(|(&a, &b)| a.min(b)).collect()
    }

    pub fn try_add(&self, other: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        if !self.same_context(other) {
            return Err(SeriesError::ContextMismatch);
        }
        let caps = self.min_caps(other);
        let mut out =
            TruncSeries { vars: self.vars.clone(), caps, terms: BTreeMap::new() };
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        self.try_add(other).expect("series addition")
    }

    pub fn neg(&self) -> TruncSeries {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> TruncSeries {
        let mut out = TruncSeries::zero_like(self);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn try_mul(&self, other: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        if !self.same_context(other) {
            return Err(SeriesError::ContextMismatch);
        }
        let caps = self.min_caps(other);
        let mut out =
            TruncSeries { vars: self.vars.clone(), caps, terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.add(eb);
                if Self::within_caps(&out.caps, &e) {
                    out.add_term(e, ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        self.try_mul(other).expect("series multiplication")
    }

    /// Formal partial derivative. The cap of `var` drops by one: a series
    /// known to order `c` determines its derivative only to order `c - 1`.
    pub fn derive(&self, var: usize) -> TruncSeries {
        assert!(var < self.vars.len(), "unknown variable index");
        let mut caps = self.caps.clone();
        caps[var] = (caps[var] - 1).max(0);
        let mut out = TruncSeries { vars: self.vars.clone(), caps, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let k = e.get(var);
            if k != 0 {
                out.add_term(e.with(var, k - 1), c * &Rat::int(k as i64));
            }
        }
        out
    }

    pub fn derive_named(&self, name: &str) -> Result<TruncSeries, SeriesError> {
        let i = self
            .var_index(name)
            .ok_or_else(|| SeriesError::UnknownVariable(name.to_string()))?;
        Ok(self.derive(i))
    }

    /// Multiply by `var^k` (used for the Euler operator `x d/dx`).
    pub fn mul_var_power(&self, var: usize, k: i32) -> TruncSeries {
        let mut out = TruncSeries::zero_like(self);
        for (e, c) in &self.terms {
            out.add_term(e.with(var, e.get(var) + k), c.clone());
        }
        out
    }

    fn check_nilpotent(&self) -> Result<(), SeriesError> {
        for e in self.terms.keys() {
            if !e.pairs().any(|(_, exp)| exp > 0) {
                return Err(SeriesError::NotNilpotent);
            }
        }
        Ok(())
    }

    /// Iteration bound for the exponential series. Any honestly nilpotent
    /// argument dies within it; mixed-sign Laurent terms whose products
    /// cancel back to bounded monomials (which the per-term check cannot
    /// see) hit the bound and error instead of looping.
    fn nilpotence_bound(&self) -> i64 {
        self.caps.iter().map(|&c| i64::from(c.max(0))).sum::<i64>() + 1
    }

    /// `sum a^k / k!`, truncated at the caps. Requires a zero constant term;
    /// terminates because every term raises some capped exponent.
    pub fn exp_trunc(&self) -> Result<TruncSeries, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        self.check_nilpotent()?;
        let bound = self.nilpotence_bound();
        let mut acc = TruncSeries::one(self.vars.as_ref().clone(), self.caps.clone());
        let mut power = acc.clone();
        let mut k = 1i64;
        loop {
            power = power.mul(self).scale(&Rat::new(1, k));
            if power.is_zero() {
                return Ok(acc);
            }
            if k > bound {
                return Err(SeriesError::NotNilpotent);
            }
            acc = acc.add(&power);
            k += 1;
        }
    }

    /// `log(1 + u)` for a series `1 + u` with `u` nilpotent. Implemented from
    /// the alternating series, independently of `exp_trunc`.
    pub fn log_trunc(&self) -> Result<TruncSeries, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let one = TruncSeries::one(self.vars.as_ref().clone(), self.caps.clone());
        let u = self.sub(&one);
        u.check_nilpotent()?;
        let bound = u.nilpotence_bound();
        let mut acc = TruncSeries::zero_like(&u);
        let mut power = one;
        let mut k = 1i64;
        loop {
            power = power.mul(&u);
            if power.is_zero() {
                return Ok(acc);
            }
            if k > bound {
                return Err(SeriesError::NotNilpotent);
            }
            let sign = if k % 2 == 1 { Rat::new(1, k) } else { Rat::new(-1, k) };
            acc = acc.add(&power.scale(&sign));
            k += 1;
        }
    }

    /// Coefficient of `var^{-1}`: the residue with respect to a formal
    /// variable whose negative powers are bounded by construction. The result
    /// lives in the same context with `var` eliminated.
    pub fn residue(&self, var: usize) -> TruncSeries {
        assert!(var < self.vars.len(), "unknown variable index");
        let mut out = TruncSeries::zero_like(self);
        for (e, c) in &self.terms {
            if e.get(var) == -1 {
                out.add_term(e.with(var, 0), c.clone());
            }
        }
        out
    }

    pub fn residue_named(&self, name: &str) -> Result<TruncSeries, SeriesError> {
        let i = self
            .var_index(name)
            .ok_or_else(|| SeriesError::UnknownVariable(name.to_string()))?;
        Ok(self.residue(i))
    }

    /// Equality of coefficients up to the componentwise minimum of the two
    /// validity caps. This is the meaningful comparison between results of
    /// different computation paths.
    pub fn eq_within_caps(&self, other: &TruncSeries) -> bool {
        if !self.same_context(other) {
            return false;
        }
        let caps = self.min_caps(other);
        let within = |e: &Expo| Self::within_caps(&caps, e);
        for (e, c) in self.terms.iter().filter(|(e, _)| within(e)) {
            if other.coeff(e) != *c {
                return false;
            }
        }
        for (e, c) in other.terms.iter().filter(|(e, _)| within(e)) {
            if self.coeff(e) != *c {
                return false;
            }
        }
        true
    }

    /// Canonical JSON: variables in context order, terms in lexicographic
    /// exponent order, integers as decimal strings. Byte-identical across
    /// runs for equal series.
    pub fn to_canonical_json(&self) -> String {
        let mut s = String::from("{\"vars\":[");
        for (i, (v, cap)) in self.vars.iter().zip(&self.caps).enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!(
                "{{\"name\":{},\"degree\":{},\"cap\":{}}}",
                serde_json::to_string(&v.name).unwrap(),
                v.degree,
                cap
            ));
        }
        s.push_str("],\"terms\":[");
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let dense: Vec<String> =
                (0..self.vars.len()).map(|v| e.get(v).to_string()).collect();
            s.push_str(&format!(
                "{{\"exp\":[{}],\"num\":\"{}\",\"den\":\"{}\"}}",
                dense.join(","),
                c.numer(),
                c.denom()
            ));
        }
        s.push_str("]}");
        s
    }

    pub fn from_json(text: &str) -> Result<TruncSeries, SeriesError> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| SeriesError::Parse(e.to_string()))?;
        let vars_v = v["vars"].as_array().ok_or_else(|| SeriesError::Parse("vars".into()))?;
        let mut vars = Vec::new();
        let mut caps = Vec::new();
        for w in vars_v {
            let name = w["name"].as_str().ok_or_else(|| SeriesError::Parse("name".into()))?;
            let degree =
                w["degree"].as_i64().ok_or_else(|| SeriesError::Parse("degree".into()))?;
            let cap = w["cap"].as_i64().ok_or_else(|| SeriesError::Parse("cap".into()))?;
            vars.push(VarSpec::new(name, degree));
            caps.push(cap as i32);
        }
        let mut out = TruncSeries::zero(vars, caps);
        let terms_v =
            v["terms"].as_array().ok_or_else(|| SeriesError::Parse("terms".into()))?;
        for t in terms_v {
            let exp = t["exp"].as_array().ok_or_else(|| SeriesError::Parse("exp".into()))?;
            let pairs: Vec<(usize, i32)> = exp
                .iter()
                .enumerate()
                .map(|(i, x)| (i, x.as_i64().unwrap_or(0) as i32))
                .collect();
            let num = t["num"].as_str().ok_or_else(|| SeriesError::Parse("num".into()))?;
            let den = t["den"].as_str().ok_or_else(|| SeriesError::Parse("den".into()))?;
            let c = Rat::from_decimal_strings(num, den).map_err(SeriesError::Parse)?;
            out.add_term(Expo::of(&pairs), c);
        }
        Ok(out)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, exp) in e.pairs() {
                if exp == 1 {
                    write!(f, "*{}", self.vars[i].name)?;
                } else {
                    write!(f, "*{}^{}", self.vars[i].name, exp)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> (Vec<VarSpec>, Vec<i32>) {
        (vec![VarSpec::new("q", -6), VarSpec::new("t", 2)], vec![4, 10])
    }

    fn var(s: &TruncSeries, name: &str, e: i32) -> TruncSeries {
        s.monomial(&[(s.var_index(name).unwrap(), e)], Rat::one())
    }

    #[test]
    fn additive_cancellation() {
        // (1 + q) + (-1) -> q
        let (v, c) = ctx();
        let zero = TruncSeries::zero(v, c);
        let one = zero.monomial(&[], Rat::one());
        let q = var(&zero, "q", 1);
        let s = one.add(&q).add(&one.neg());
        assert_eq!(s, q);
        // a + 0 -> a
        assert_eq!(q.add(&zero), q);
    }

    #[test]
    fn mul_truncates_to_caps() {
        // (1+q)(1-q) with q-cap 2 -> 1 - q^2
        let zero = TruncSeries::zero(vec![VarSpec::new("q", -6)], vec![2]);
        let one = zero.monomial(&[], Rat::one());
        let q = zero.monomial(&[(0, 1)], Rat::one());
        let p = one.add(&q).mul(&one.sub(&q));
        assert_eq!(p.coeff_of(&[]), Rat::one());
        assert_eq!(p.coeff_of(&[(0, 1)]), Rat::zero());
        assert_eq!(p.coeff_of(&[(0, 2)]), Rat::int(-1));
    }

    #[test]
    fn cap_propagation_on_mul() {
        // x*x where operands are valid to cap 3 -> result certified to cap 3.
        let a = TruncSeries::zero(vec![VarSpec::new("x", -6)], vec![3])
            .monomial(&[(0, 1)], Rat::one());
        let sq = a.mul(&a);
        assert_eq!(sq.caps(), &[3]);
    }

    #[test]
    fn exp_inverse_pair() {
        // exp(t)*exp(-t) truncated at cap 10 -> 1
        let zero = TruncSeries::zero(vec![VarSpec::new("t1", 0)], vec![10]);
        let t = zero.monomial(&[(0, 1)], Rat::one());
        let e = t.exp_trunc().unwrap();
        let einv = t.neg().exp_trunc().unwrap();
        let prod = e.mul(&einv);
        let one = zero.monomial(&[], Rat::one());
        assert_eq!(prod, one);
        // exp(0) = 1
        assert_eq!(zero.exp_trunc().unwrap(), one);
    }

    #[test]
    fn exp_rejects_constant_term() {
        let (v, c) = ctx();
        let one = TruncSeries::one(v, c);
        assert_eq!(one.exp_trunc().unwrap_err(), SeriesError::NonzeroConstantTerm);
    }

    #[test]
    fn exp_rejects_hidden_units() {
        // u v^{-1} and u^{-1} v each carry a positive exponent, but their
        // product is the unit monomial: the power series never dies, and the
        // iteration bound turns the would-be hang into an error
        let zero = TruncSeries::zero(
            vec![VarSpec::new("u", 0), VarSpec::new("v", 0)],
            vec![4, 4],
        );
        let mut s = zero.clone();
        s.add_term(Expo::of(&[(0, 1), (1, -1)]), Rat::one());
        s.add_term(Expo::of(&[(0, -1), (1, 1)]), Rat::one());
        assert_eq!(s.exp_trunc().unwrap_err(), SeriesError::NotNilpotent);
        // a term with no positive exponent at all is rejected up front
        let mut t = zero.clone();
        t.add_term(Expo::of(&[(0, -2)]), Rat::one());
        assert_eq!(t.exp_trunc().unwrap_err(), SeriesError::NotNilpotent);
    }

    #[test]
    fn derive_basic() {
        // d/dt of t^3 = 3 t^2, and the t-cap drops by one.
        let (v, c) = ctx();
        let zero = TruncSeries::zero(v, c);
        let t3 = var(&zero, "t", 3);
        let d = t3.derive_named("t").unwrap();
        assert_eq!(d.coeff_of(&[(1, 2)]), Rat::int(3));
        assert_eq!(d.caps()[1], 9);
        assert!(zero.derive_named("nope").is_err());
    }

    #[test]
    fn residue_picks_minus_one() {
        let zero = TruncSeries::zero(vec![VarSpec::new("t", 0), VarSpec::new("p", 0)], vec![3, 3]);
        let mut s = zero.clone();
        s.add_term(Expo::of(&[(0, -1)]), Rat::int(5));
        s.add_term(Expo::of(&[(0, 0)]), Rat::int(7));
        s.add_term(Expo::of(&[(0, 1)]), Rat::int(9));
        s.add_term(Expo::of(&[(0, -1), (1, 2)]), Rat::int(11));
        let r = s.residue_named("t").unwrap();
        assert_eq!(r.coeff_of(&[]), Rat::int(5));
        assert_eq!(r.coeff_of(&[(1, 2)]), Rat::int(11));
        // residue of t^0 + t^1 -> 0
        let t = zero.monomial(&[(0, 0)], Rat::one()).add(&zero.monomial(&[(0, 1)], Rat::one()));
        assert!(t.residue_named("t").unwrap().is_zero());
    }

    #[test]
    fn expo_order_is_dense_lex() {
        let a = Expo::of(&[(0, 2)]);
        let b = Expo::of(&[(1, 3)]);
        // dense: [2,0] vs [0,3]
        assert!(a > b);
        let c = Expo::of(&[(0, 2), (1, 1)]);
        assert!(c > a);
        assert!(Expo::unit() < b);
        // negative exponents sort below zero
        let d = Expo::of(&[(0, -1)]);
        assert!(d < Expo::unit());
    }

    #[test]
    fn json_round_trip_and_order() {
        let (v, c) = ctx();
        let zero = TruncSeries::zero(v, c);
        let s = zero
            .monomial(&[(0, 1), (1, 2)], Rat::new(-1, 24))
            .add(&zero.monomial(&[(1, 1)], Rat::new(1, 2)));
        let j = s.to_canonical_json();
        let back = TruncSeries::from_json(&j).unwrap();
        assert_eq!(back, s);
        // terms sorted lexicographically: [0,1] before [1,2]
        let i1 = j.find("\"exp\":[0,1]").unwrap();
        let i2 = j.find("\"exp\":[1,2]").unwrap();
        assert!(i1 < i2);
        assert!(j.starts_with("{\"vars\":[{\"name\":\"q\""));
    }
}
