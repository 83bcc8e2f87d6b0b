//! Sparse bivariate polynomials over a [`FieldCtx`].
//!
//! Univariate polynomials are `BiPoly`s that happen not to mention one of
//! the variables. Terms live in a `BTreeMap` keyed by graded-lex exponent
//! order, so iteration and printing are deterministic.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::gfield::{FieldCtx, Felt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomials belong to different fields")]
    CtxMismatch,
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("division leaves a nonzero remainder")]
    NonzeroRemainder,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operands are not univariate in a common variable")]
    NotUnivariate,
    #[error("divisor is constant in {0}")]
    ConstantInVar(Var),
}

pub type PolyResult<T> = Result<T, PolyError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "X",
            Var::Y => "Y",
        })
    }
}

/// Exponent pair `X^x Y^y`, ordered by total degree, then by the `X`
/// exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Exp {
    pub x: u32,
    pub y: u32,
}

impl Exp {
    pub const fn new(x: u32, y: u32) -> Self {
        Exp { x, y }
    }

    fn deg(self) -> u64 {
        self.x as u64 + self.y as u64
    }

    fn of(self, var: Var) -> u32 {
        match var {
            Var::X => self.x,
            Var::Y => self.y,
        }
    }
}

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.deg(), self.x).cmp(&(other.deg(), other.x))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Display names of the two variables, e.g. `("ξ", "ρ")`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarNames(pub &'static str, pub &'static str);

impl VarNames {
    pub const XY: VarNames = VarNames("X", "Y");
}

impl Default for VarNames {
    fn default() -> Self {
        VarNames::XY
    }
}

#[derive(Clone, Debug)]
pub struct BiPoly {
    ctx: Arc<FieldCtx>,
    terms: BTreeMap<Exp, Felt>,
    names: VarNames,
}

impl PartialEq for BiPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for BiPoly {}

fn same_ctx(a: &Arc<FieldCtx>, b: &Arc<FieldCtx>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl BiPoly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        BiPoly { ctx: ctx.clone(), terms: BTreeMap::new(), names: VarNames::XY }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: Felt) -> Self {
        Self::monomial(ctx, c, 0, 0)
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        Self::constant(ctx, Felt::ONE)
    }

    pub fn x(ctx: &Arc<FieldCtx>) -> Self {
        Self::monomial(ctx, Felt::ONE, 1, 0)
    }

    pub fn y(ctx: &Arc<FieldCtx>) -> Self {
        Self::monomial(ctx, Felt::ONE, 0, 1)
    }

    pub fn var(ctx: &Arc<FieldCtx>, var: Var) -> Self {
        match var {
            Var::X => Self::x(ctx),
            Var::Y => Self::y(ctx),
        }
    }

    /// `c X^i Y^j`.
    pub fn monomial(ctx: &Arc<FieldCtx>, c: Felt, i: u32, j: u32) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Exp::new(i, j), c);
        }
        p
    }

    /// Sums the given terms; repeated exponents are combined.
    pub fn from_terms<I>(ctx: &Arc<FieldCtx>, terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Felt)>,
    {
        let mut p = Self::zero(ctx);
        for (i, j, c) in terms {
            p.add_term(Exp::new(i, j), c);
        }
        p
    }

    fn add_term(&mut self, e: Exp, c: Felt) {
        if c.is_zero() {
            return;
        }
        let ctx = &self.ctx;
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = ctx.add(*v, c);
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn names(&self) -> VarNames {
        self.names
    }

    pub fn with_names(mut self, names: VarNames) -> Self {
        self.names = names;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.x == 0 && e.y == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Exp, Felt)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, i: u32, j: u32) -> Felt {
        self.terms.get(&Exp::new(i, j)).copied().unwrap_or(Felt::ZERO)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Felt {
        self.coeff(0, 0)
    }

    /// Degree in `var`; `None` for the zero polynomial.
    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.terms.keys().map(|e| e.of(var)).max()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.degree_in(Var::X)
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.degree_in(Var::Y)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.deg()).max()
    }

    /// Whether no term involves `var`.
    pub fn is_free_of(&self, var: Var) -> bool {
        self.terms.keys().all(|e| e.of(var) == 0)
    }

    fn check(&self, other: &Self) -> PolyResult<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(PolyError::CtxMismatch)
        }
    }

    fn like(&self, terms: BTreeMap<Exp, Felt>) -> Self {
        BiPoly { ctx: self.ctx.clone(), terms, names: self.names }
    }

    pub fn checked_add(&self, other: &Self) -> PolyResult<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> PolyResult<Self> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        let ctx = &self.ctx;
        self.like(self.terms.iter().map(|(&e, &c)| (e, ctx.neg(c))).collect())
    }

    pub fn checked_mul(&self, other: &Self) -> PolyResult<Self> {
        self.check(other)?;
        let ctx = &self.ctx;
        let mut acc: HashMap<Exp, Felt> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &other.terms {
                let e = Exp::new(e1.x + e2.x, e1.y + e2.y);
                let c = ctx.mul(c1, c2);
                let slot = acc.entry(e).or_insert(Felt::ZERO);
                *slot = ctx.add(*slot, c);
            }
        }
        Ok(self.like(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()))
    }

    pub fn scale(&self, c: Felt) -> Self {
        if c.is_zero() {
            return self.like(BTreeMap::new());
        }
        let ctx = &self.ctx;
        self.like(self.terms.iter().map(|(&e, &v)| (e, ctx.mul(v, c))).collect())
    }

    /// Multiplies by `X^i Y^j`.
    pub fn shift(&self, i: u32, j: u32) -> Self {
        self.like(self.terms.iter().map(|(&e, &c)| (Exp::new(e.x + i, e.y + j), c)).collect())
    }

    /// `f^{p^k}`, computed termwise since raising to `p` is additive.
    pub fn frobenius_power(&self, k: u32) -> Self {
        let ctx = &self.ctx;
        let pk = ctx.p().pow(k);
        self.like(
            self.terms
                .iter()
                .map(|(&e, &c)| (Exp::new(e.x * pk, e.y * pk), ctx.frobenius(c, k)))
                .collect(),
        )
    }

    /// `f^e`, splitting `e` into base-`p` digits so that each digit costs a
    /// small power of a termwise Frobenius image.
    pub fn pow(&self, mut e: u64) -> Self {
        let p = self.ctx.p() as u64;
        let mut result = BiPoly::one(&self.ctx).with_names(self.names);
        let mut base = self.clone();
        while e > 0 {
            let d = e % p;
            if d > 0 {
                result = &result * &base.small_pow(d);
            }
            e /= p;
            if e > 0 {
                base = base.frobenius_power(1);
            }
        }
        result
    }

    fn small_pow(&self, mut e: u64) -> Self {
        let mut result = BiPoly::one(&self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn pow_signed(&self, e: i64) -> PolyResult<Self> {
        if e < 0 {
            return Err(PolyError::NegativeExponent(e));
        }
        Ok(self.pow(e as u64))
    }

    pub fn eval(&self, x: Felt, y: Felt) -> Felt {
        let ctx = &self.ctx;
        let mut xp: HashMap<u32, Felt> = HashMap::new();
        let mut yp: HashMap<u32, Felt> = HashMap::new();
        let mut acc = Felt::ZERO;
        for (&e, &c) in &self.terms {
            let a = *xp.entry(e.x).or_insert_with(|| ctx.pow(x, e.x as u128));
            let b = *yp.entry(e.y).or_insert_with(|| ctx.pow(y, e.y as u128));
            acc = ctx.add(acc, ctx.mul(c, ctx.mul(a, b)));
        }
        acc
    }

    /// Coefficients of `f(x, Y)` as a polynomial in `Y`, keyed by exponent.
    pub fn fiber_at_x(&self, x: Felt) -> BTreeMap<u32, Felt> {
        let ctx = &self.ctx;
        let mut out: BTreeMap<u32, Felt> = BTreeMap::new();
        for (&e, &c) in &self.terms {
            let v = ctx.mul(c, ctx.pow(x, e.x as u128));
            let slot = out.entry(e.y).or_insert(Felt::ZERO);
            *slot = ctx.add(*slot, v);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `f(u, v)`.
    pub fn substitute(&self, u: &Self, v: &Self) -> PolyResult<Self> {
        self.check(u)?;
        self.check(v)?;
        let mut upow = PowerCache::new(u);
        let mut vpow = PowerCache::new(v);
        let mut acc = BiPoly::zero(&self.ctx);
        // group by Y exponent to reuse v^j
        let mut by_y: BTreeMap<u32, Vec<(u32, Felt)>> = BTreeMap::new();
        for (&e, &c) in &self.terms {
            by_y.entry(e.y).or_default().push((e.x, c));
        }
        for (j, xs) in by_y {
            let mut inner = BiPoly::zero(&self.ctx);
            for (i, c) in xs {
                let t = upow.get(i).scale(c);
                for (&e, &d) in &t.terms {
                    inner.add_term(e, d);
                }
            }
            let term = &inner * vpow.get(j);
            for (&e, &d) in &term.terms {
                acc.add_term(e, d);
            }
        }
        Ok(acc.with_names(self.names))
    }

    pub fn partial(&self, var: Var) -> Self {
        let ctx = &self.ctx;
        let mut out = BTreeMap::new();
        for (&e, &c) in &self.terms {
            let k = e.of(var);
            if k % ctx.p() == 0 {
                continue;
            }
            let ne = match var {
                Var::X => Exp::new(e.x - 1, e.y),
                Var::Y => Exp::new(e.x, e.y - 1),
            };
            out.insert(ne, ctx.scalar(k as i64, c));
        }
        self.like(out)
    }

    /// The variable a univariate polynomial lives in; `None` when it is
    /// constant or genuinely bivariate.
    fn univariate_var(&self) -> Option<Var> {
        match (self.is_free_of(Var::X), self.is_free_of(Var::Y)) {
            (true, false) => Some(Var::Y),
            (false, true) => Some(Var::X),
            _ => None,
        }
    }

    /// Coefficient of `var^k`, as a polynomial in the other variable.
    pub fn coeff_of(&self, var: Var, k: u32) -> Self {
        self.like(
            self.terms
                .iter()
                .filter(|(e, _)| e.of(var) == k)
                .map(|(&e, &c)| match var {
                    Var::X => (Exp::new(0, e.y), c),
                    Var::Y => (Exp::new(e.x, 0), c),
                })
                .collect(),
        )
    }

    /// Leading coefficient with respect to `var`, as a polynomial in the
    /// other variable, and the degree.
    fn lead_in(&self, var: Var) -> Option<(u32, BiPoly)> {
        let d = self.degree_in(var)?;
        let lc = self
            .terms
            .iter()
            .filter(|(e, _)| e.of(var) == d)
            .map(|(&e, &c)| match var {
                Var::X => (Exp::new(0, e.y), c),
                Var::Y => (Exp::new(e.x, 0), c),
            })
            .collect();
        Some((d, self.like(lc)))
    }

    fn var_power(&self, var: Var, d: u32) -> BiPoly {
        match var {
            Var::X => BiPoly::monomial(&self.ctx, Felt::ONE, d, 0),
            Var::Y => BiPoly::monomial(&self.ctx, Felt::ONE, 0, d),
        }
    }

    /// Quotient and remainder of univariate polynomials.
    pub fn div_rem(&self, g: &Self) -> PolyResult<(Self, Self)> {
        self.check(g)?;
        if g.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let var = match (self.univariate_var(), g.univariate_var()) {
            (Some(a), Some(b)) if a == b => a,
            (Some(a), None) if g.is_constant() => a,
            (None, Some(b)) if self.is_constant() => b,
            (None, None) if self.is_constant() && g.is_constant() => Var::X,
            _ => return Err(PolyError::NotUnivariate),
        };
        let ctx = &self.ctx;
        let (dg, lg) = g.lead_in(var).expect("nonzero divisor");
        let lead_inv = ctx.inv(lg.constant_term()).expect("nonzero leading coefficient");
        let mut q = BiPoly::zero(&self.ctx);
        let mut r = self.clone();
        while let Some((dr, lr)) = r.lead_in(var) {
            if dr < dg {
                break;
            }
            let c = ctx.mul(lr.constant_term(), lead_inv);
            let step = match var {
                Var::X => Exp::new(dr - dg, 0),
                Var::Y => Exp::new(0, dr - dg),
            };
            q.add_term(step, c);
            let sub = g.shift(step.x, step.y).scale(ctx.neg(c));
            for (&e, &v) in &sub.terms {
                r.add_term(e, v);
            }
        }
        Ok((q.with_names(self.names), r.with_names(self.names)))
    }

    /// `f / g` for univariate `f, g`, failing unless the division is exact.
    pub fn exact_div(&self, g: &Self) -> PolyResult<Self> {
        let (q, r) = self.div_rem(g)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NonzeroRemainder)
        }
    }

    /// Pseudo-remainder of `self` by `g` with respect to `var`: the
    /// remainder of `lc(g)^k · self`, with coefficients polynomial in the
    /// other variable.
    pub fn pseudo_rem(&self, g: &Self, var: Var) -> PolyResult<Self> {
        self.check(g)?;
        let (dg, lg) = match g.lead_in(var) {
            Some((d, lg)) if d >= 1 => (d, lg),
            _ => return Err(PolyError::ConstantInVar(var)),
        };
        let ctx = &self.ctx;
        let lg_const = if lg.is_constant() { Some(lg.constant_term()) } else { None };
        let mut r = self.clone();
        while let Some((dr, lr)) = r.lead_in(var) {
            if dr < dg {
                break;
            }
            let shift = g.var_power(var, dr - dg);
            r = match lg_const {
                // a constant leading coefficient needs no pseudo-multiplier
                Some(c) => {
                    let f = ctx.div(Felt::ONE, c).expect("nonzero leading coefficient");
                    &r - &(&(&lr * &shift) * g).scale(f)
                }
                None => &(&r * &lg) - &(&(&lr * &shift) * g),
            };
        }
        Ok(r.with_names(self.names))
    }

    /// Text form: `c*X^i*Y^j` terms joined by ` + `, highest grlex first, with
    /// coefficients in the integer encoding.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, &c)| {
                let mut factors = Vec::new();
                let enc = self.ctx.encode(c);
                if enc != 1 || (e.x == 0 && e.y == 0) {
                    factors.push(enc.to_string());
                }
                for (name, k) in [(self.names.0, e.x), (self.names.1, e.y)] {
                    match k {
                        0 => {}
                        1 => factors.push(name.to_string()),
                        _ => factors.push(format!("{name}^{k}")),
                    }
                }
                factors.join("*")
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

struct PowerCache<'a> {
    base: &'a BiPoly,
    cache: HashMap<u32, BiPoly>,
}

impl<'a> PowerCache<'a> {
    fn new(base: &'a BiPoly) -> Self {
        PowerCache { base, cache: HashMap::new() }
    }

    fn get(&mut self, e: u32) -> &BiPoly {
        if !self.cache.contains_key(&e) {
            let v = if e > 0 && self.cache.contains_key(&(e - 1)) {
                &self.cache[&(e - 1)] * self.base
            } else {
                self.base.pow(e as u64)
            };
            self.cache.insert(e, v);
        }
        &self.cache[&e]
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&BiPoly> for &BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: &BiPoly) -> BiPoly {
                self.$checked(rhs).expect("polynomials over different fields")
            }
        }

        impl $tr<BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: BiPoly) -> BiPoly {
                (&self).$method(&rhs)
            }
        }

        impl $tr<&BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: &BiPoly) -> BiPoly {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.neg_ref()
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.neg_ref()
    }
}
