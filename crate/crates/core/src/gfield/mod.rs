//! Arithmetic in the tower F_p ⊆ F_q ⊆ F_{q^2} ⊆ F_{q^4}, q = p^h.
//!
//! A single ambient field F_{p^{4h}} is realized as F_p[X]/(f) with `f` the
//! lexicographically least monic irreducible of degree 4h. Subfields are the
//! fixed sets of powers of Frobenius; there are no embedding maps.
//!
//! Elements are small `Copy` values ([`Felt`]) that only make sense together
//! with the [`FieldCtx`] that produced them.

mod fpx;
pub mod linalg;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use linalg::{span_with_offset, FpMatrix, FpSystem};

/// Default cap on the number of elements an enumeration may visit.
pub const DEFAULT_ENUMERATION_BOUND: u128 = 1 << 30;

/// Largest ambient field representable by [`Felt`]'s integer encoding.
pub const MAX_AMBIENT_ORDER: u128 = 1 << 62;

const MAX_BINARY_DEGREE: u32 = 32;
const MAX_ODD_DEGREE: usize = 16;
const MAX_ODD_PRIME: u32 = 127;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension exponent h must be at least 1")]
    ZeroExponent,
    #[error("ambient field of size {p}^{degree} exceeds the supported size bound")]
    TooLarge { p: u64, degree: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not in the subfield F_(p^{0})")]
    NotInSubfield(u32),
    #[error("{m} does not divide {n}")]
    NotDivisor { m: u32, n: u32 },
    #[error("additive polynomial has no coefficients")]
    EmptyCoefficients,
    #[error("encoding {0} is out of range for this field")]
    BadEncoding(u128),
    #[error("enumeration of {0} elements exceeds the configured bound")]
    EnumerationBound(u128),
}

pub type FieldResult<T> = Result<T, FieldError>;

/// A field element in packed form.
///
/// For `p = 2` bit `i` holds the coefficient of `X^i`; for odd `p` byte `i`
/// does. Both packings order elements exactly like their integer encodings.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Felt(u128);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Binary operations accepted by [`FieldCtx::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Raise to a (possibly negative) integer power.
    Pow(i128),
}

#[derive(Clone, Debug)]
enum Kernel {
    Binary { modulus_bits: u64 },
    // reduction[k] = X^{n+k} mod f, for k in 0..n-1
    Odd { reduction: Vec<[u32; MAX_ODD_DEGREE]> },
}

/// The ambient field F_{p^{4h}} together with its deterministic modulus.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    h: u32,
    degree: u32,
    order: u128,
    modulus: Vec<u32>,
    kernel: Kernel,
    subfield_bases: BTreeMap<u32, Vec<Felt>>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.h == other.h && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Serialized form of a [`FieldCtx`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub h: u32,
    /// `c_0, ..., c_{4h-1}` of the monic modulus (leading 1 omitted).
    pub modulus: Vec<u32>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Least monic irreducible of degree `n` over F_p, ordering candidates by
/// `Σ c_i p^i` (the integer encoding of `f - X^n`), so `c_{n-1}` is the most
/// significant coefficient.
fn least_irreducible(p: u32, n: u32) -> Vec<u32> {
    let total = (p as u128).pow(n);
    for t in 1..total {
        // c_0 = 0 means X | f
        if t % p as u128 == 0 {
            continue;
        }
        let mut coeffs = vec![0u32; n as usize + 1];
        let mut rest = t;
        for c in coeffs.iter_mut().take(n as usize) {
            *c = (rest % p as u128) as u32;
            rest /= p as u128;
        }
        coeffs[n as usize] = 1;
        if fpx::is_irreducible(&coeffs, p) {
            coeffs.pop();
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

/// Builds the field context for `(p, h)`.
pub fn make_field(p: u64, h: u32) -> FieldResult<FieldCtx> {
    FieldCtx::new(p, h)
}

impl FieldCtx {
    pub fn new(p: u64, h: u32) -> FieldResult<Self> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if h == 0 {
            return Err(FieldError::ZeroExponent);
        }
        let degree = 4 * h;
        let too_large = FieldError::TooLarge { p, degree };
        let supported = if p == 2 {
            degree <= MAX_BINARY_DEGREE
        } else {
            p <= MAX_ODD_PRIME as u64 && degree as usize <= MAX_ODD_DEGREE
        };
        if !supported {
            return Err(too_large);
        }
        let order = (p as u128).checked_pow(degree).ok_or(too_large.clone())?;
        if order > MAX_AMBIENT_ORDER {
            return Err(too_large);
        }
        let p = p as u32;
        let modulus = least_irreducible(p, degree);
        let kernel = if p == 2 {
            let mut bits = 1u64 << degree;
            for (i, &c) in modulus.iter().enumerate() {
                bits |= (c as u64) << i;
            }
            Kernel::Binary { modulus_bits: bits }
        } else {
            let n = degree as usize;
            let mut reduction = Vec::with_capacity(n);
            // X^n = -Σ c_i X^i
            let mut cur = [0u32; MAX_ODD_DEGREE];
            for i in 0..n {
                cur[i] = (p - modulus[i]) % p;
            }
            reduction.push(cur);
            for _ in 1..n.saturating_sub(1) {
                let top = cur[n - 1];
                let mut next = [0u32; MAX_ODD_DEGREE];
                for i in (1..n).rev() {
                    next[i] = cur[i - 1];
                }
                for i in 0..n {
                    next[i] = (next[i] + top * reduction[0][i]) % p;
                }
                reduction.push(next);
                cur = next;
            }
            Kernel::Odd { reduction }
        };
        let mut ctx = FieldCtx {
            p,
            h,
            degree,
            order,
            modulus,
            kernel,
            subfield_bases: BTreeMap::new(),
        };
        let divisors: Vec<u32> = (1..=degree).filter(|m| degree.is_multiple_of(*m)).collect();
        let mut bases = BTreeMap::new();
        for m in divisors {
            bases.insert(m, ctx.compute_subfield_basis(m));
        }
        ctx.subfield_bases = bases;
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// `q = p^h`.
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.h)
    }

    /// Degree of the ambient field over F_p, always `4h`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p, h: self.h, modulus: self.modulus.clone() }
    }

    pub fn zero(&self) -> Felt {
        Felt::ZERO
    }

    pub fn one(&self) -> Felt {
        Felt::ONE
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Felt {
        let r = n.rem_euclid(self.p as i64) as u128;
        Felt(r)
    }

    /// The power-basis generator `X` (encoding `p`).
    pub fn generator(&self) -> Felt {
        self.from_coeffs(&[0, 1])
    }

    fn slot_bits(&self) -> u32 {
        if self.p == 2 {
            1
        } else {
            8
        }
    }

    pub fn coeffs(&self, x: Felt) -> Vec<u32> {
        let bits = self.slot_bits();
        let mask = (1u128 << bits) - 1;
        (0..self.degree).map(|i| ((x.0 >> (i * bits)) & mask) as u32).collect()
    }

    /// Packs coefficients (reduced mod p); missing ones are zero.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Felt {
        assert!(coeffs.len() <= self.degree as usize, "too many coefficients");
        let bits = self.slot_bits();
        let mut v = 0u128;
        for (i, &c) in coeffs.iter().enumerate() {
            v |= ((c % self.p) as u128) << (i as u32 * bits);
        }
        Felt(v)
    }

    /// Integer encoding: base-p digits are the power-basis coefficients,
    /// least significant first.
    pub fn encode(&self, x: Felt) -> u128 {
        if self.p == 2 {
            return x.0;
        }
        self.coeffs(x).iter().rev().fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    pub fn decode(&self, n: u128) -> FieldResult<Felt> {
        if n >= self.order {
            return Err(FieldError::BadEncoding(n));
        }
        if self.p == 2 {
            return Ok(Felt(n));
        }
        let mut digits = Vec::with_capacity(self.degree as usize);
        let mut rest = n;
        for _ in 0..self.degree {
            digits.push((rest % self.p as u128) as u32);
            rest /= self.p as u128;
        }
        Ok(self.from_coeffs(&digits))
    }

    pub fn add(&self, x: Felt, y: Felt) -> Felt {
        if self.p == 2 {
            return Felt(x.0 ^ y.0);
        }
        // bytewise add, then subtract p from every byte that reached p
        let s = x.0 + y.0;
        Felt(self.reduce_bytes(s))
    }

    fn reduce_bytes(&self, s: u128) -> u128 {
        let lanes = self.byte_lanes();
        let high = lanes * 0x80;
        let t = s + lanes * (128 - self.p as u128);
        let ge = ((t & high) >> 7) & lanes;
        s - ge * self.p as u128
    }

    fn byte_lanes(&self) -> u128 {
        let n = self.degree;
        let mut v = 0u128;
        for i in 0..n {
            v |= 1u128 << (8 * i);
        }
        v
    }

    pub fn neg(&self, x: Felt) -> Felt {
        if self.p == 2 {
            return x;
        }
        let lanes = self.byte_lanes();
        Felt(self.reduce_bytes(lanes * self.p as u128 - x.0))
    }

    pub fn sub(&self, x: Felt, y: Felt) -> Felt {
        self.add(x, self.neg(y))
    }

    /// `k · x` for an integer `k`.
    pub fn scalar(&self, k: i64, x: Felt) -> Felt {
        self.mul(self.from_int(k), x)
    }

    pub fn mul(&self, x: Felt, y: Felt) -> Felt {
        match &self.kernel {
            Kernel::Binary { modulus_bits } => {
                let (mut a, mut b) = (x.0 as u64, y.0 as u64);
                let mut r = 0u64;
                while b != 0 {
                    if b & 1 == 1 {
                        r ^= a;
                    }
                    a <<= 1;
                    b >>= 1;
                }
                let n = self.degree;
                let mut bit = 2 * n - 1;
                while bit >= n {
                    if (r >> bit) & 1 == 1 {
                        r ^= modulus_bits << (bit - n);
                    }
                    bit -= 1;
                }
                Felt(r as u128)
            }
            Kernel::Odd { reduction } => {
                let n = self.degree as usize;
                let p = self.p;
                let mut a = [0u32; MAX_ODD_DEGREE];
                let mut b = [0u32; MAX_ODD_DEGREE];
                for i in 0..n {
                    a[i] = ((x.0 >> (8 * i)) & 0xff) as u32;
                    b[i] = ((y.0 >> (8 * i)) & 0xff) as u32;
                }
                let mut prod = [0u32; 2 * MAX_ODD_DEGREE];
                for i in 0..n {
                    if a[i] == 0 {
                        continue;
                    }
                    for j in 0..n {
                        prod[i + j] += a[i] * b[j];
                    }
                }
                for k in (0..n.saturating_sub(1)).rev() {
                    let c = prod[n + k] % p;
                    if c != 0 {
                        let red = &reduction[k];
                        for j in 0..n {
                            prod[j] += c * red[j];
                        }
                    }
                }
                let mut v = 0u128;
                for i in 0..n {
                    v |= ((prod[i] % p) as u128) << (8 * i);
                }
                Felt(v)
            }
        }
    }

    pub fn square(&self, x: Felt) -> Felt {
        self.mul(x, x)
    }

    pub fn pow(&self, x: Felt, mut e: u128) -> Felt {
        let mut result = Felt::ONE;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        result
    }

    pub fn pow_signed(&self, x: Felt, e: i128) -> FieldResult<Felt> {
        if e >= 0 {
            Ok(self.pow(x, e as u128))
        } else {
            let inv = self.inv(x)?;
            Ok(self.pow(inv, e.unsigned_abs()))
        }
    }

    pub fn inv(&self, x: Felt) -> FieldResult<Felt> {
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(x, self.order - 2))
    }

    pub fn div(&self, x: Felt, y: Felt) -> FieldResult<Felt> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn arith(&self, x: Felt, y: Felt, op: ArithOp) -> FieldResult<Felt> {
        match op {
            ArithOp::Add => Ok(self.add(x, y)),
            ArithOp::Sub => Ok(self.sub(x, y)),
            ArithOp::Mul => Ok(self.mul(x, y)),
            ArithOp::Div => self.div(x, y),
            ArithOp::Pow(e) => self.pow_signed(x, e),
        }
    }

    /// `x^{p^m}`.
    pub fn frobenius(&self, x: Felt, m: u32) -> Felt {
        let m = m % self.degree;
        if m == 0 || x.is_zero() {
            return x;
        }
        self.pow(x, (self.p as u128).pow(m))
    }

    /// `true` iff `x ∈ F_{p^m}`; `m` need not divide the degree.
    pub fn in_subfield(&self, x: Felt, m: u32) -> bool {
        self.frobenius(x, m) == x
    }

    fn check_divisor(&self, m: u32, n: u32) -> FieldResult<()> {
        if m == 0 || !n.is_multiple_of(m) {
            return Err(FieldError::NotDivisor { m, n });
        }
        Ok(())
    }

    /// Relative trace `Σ_{i < n/m} x^{p^{mi}}` from F_{p^n} down to F_{p^m}.
    pub fn rel_trace(&self, x: Felt, m: u32, n: u32) -> FieldResult<Felt> {
        self.check_divisor(n, self.degree)?;
        self.check_divisor(m, n)?;
        if !self.in_subfield(x, n) {
            return Err(FieldError::NotInSubfield(n));
        }
        let mut acc = Felt::ZERO;
        let mut term = x;
        for _ in 0..n / m {
            acc = self.add(acc, term);
            term = self.frobenius(term, m);
        }
        Ok(acc)
    }

    fn compute_subfield_basis(&self, m: u32) -> Vec<Felt> {
        let n = self.degree as usize;
        let columns: Vec<Vec<u32>> = (0..n)
            .map(|j| {
                let mut unit = vec![0u32; n];
                unit[j] = 1;
                let e = self.from_coeffs(&unit);
                let img = self.sub(self.frobenius(e, m), e);
                self.coeffs(img)
            })
            .collect();
        let sys = FpSystem::new(&FpMatrix::from_columns(self.p, n, &columns));
        sys.kernel_basis().iter().map(|v| self.from_coeffs(v)).collect()
    }

    /// F_p-basis of F_{p^m}, the kernel of `Frob^m - id`.
    pub fn subfield_basis(&self, m: u32) -> FieldResult<&[Felt]> {
        self.subfield_bases
            .get(&m)
            .map(|v| v.as_slice())
            .ok_or(FieldError::NotDivisor { m, n: self.degree })
    }

    /// Every element of F_{p^m} in increasing encoding order.
    pub fn subfield_elements(&self, m: u32) -> FieldResult<Vec<Felt>> {
        self.subfield_elements_bounded(m, DEFAULT_ENUMERATION_BOUND)
    }

    pub fn subfield_elements_bounded(&self, m: u32, bound: u128) -> FieldResult<Vec<Felt>> {
        let basis = self.subfield_basis(m)?;
        let size = (self.p as u128).pow(m);
        if size > bound {
            return Err(FieldError::EnumerationBound(size));
        }
        let mut out = vec![Felt::ZERO];
        for &b in basis {
            let mut next = Vec::with_capacity(out.len() * self.p as usize);
            for &x in &out {
                let mut cur = x;
                for _ in 0..self.p {
                    next.push(cur);
                    cur = self.add(cur, b);
                }
            }
            out = next;
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: Felt) -> FieldResult<u128> {
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let mut ord = self.order - 1;
        for r in fpx::prime_factors(self.order - 1) {
            while ord.is_multiple_of(r) && self.pow(x, ord / r) == Felt::ONE {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// First element of F_{p^m} (in encoding order) of order `p^m - 1`.
    pub fn primitive_element(&self, m: u32) -> FieldResult<Felt> {
        let target = (self.p as u128).pow(m) - 1;
        let factors = fpx::prime_factors(target);
        for x in self.subfield_elements(m)? {
            if x.is_zero() {
                continue;
            }
            if factors.iter().all(|&r| self.pow(x, target / r) != Felt::ONE) {
                return Ok(x);
            }
        }
        unreachable!("finite fields have primitive elements")
    }

    /// A fixed `ω ∈ F_{q^2}` with `ω^{q-1} = -1`: `1` in characteristic 2,
    /// otherwise `g^{(q+1)/2}` for the first primitive `g` of F_{q^2}.
    pub fn find_omega(&self) -> Felt {
        if self.p == 2 {
            return Felt::ONE;
        }
        let g = self
            .primitive_element(2 * self.h)
            .expect("2h divides the ambient degree");
        self.pow(g, (self.q() as u128).div_ceil(2))
    }

    /// The additive polynomial `Σ c_i y^{p^i}` evaluated at `y`.
    pub fn eval_additive(&self, coeffs: &[Felt], y: Felt) -> Felt {
        let mut acc = Felt::ZERO;
        let mut term = y;
        for (i, &c) in coeffs.iter().enumerate() {
            if i > 0 {
                term = self.frobenius(term, 1);
            }
            if !c.is_zero() {
                acc = self.add(acc, self.mul(c, term));
            }
        }
        acc
    }

    pub fn display(&self, x: Felt) -> FeltDisplay<'_> {
        FeltDisplay { ctx: self, x }
    }
}

/// Prints an element in its integer encoding.
pub struct FeltDisplay<'a> {
    ctx: &'a FieldCtx,
    x: Felt,
}

impl fmt::Display for FeltDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ctx.encode(self.x))
    }
}

/// An additive polynomial `L(y) = Σ c_i y^{p^i}` restricted to a subfield,
/// solved by F_p-linear algebra.
#[derive(Clone, Debug)]
pub struct LinearizedSolver {
    basis: Vec<Felt>,
    system: FpSystem,
    kernel: Vec<Vec<u32>>,
    p: u32,
}

impl LinearizedSolver {
    pub fn new(ctx: &FieldCtx, coeffs: &[Felt], domain: u32) -> FieldResult<Self> {
        if coeffs.is_empty() {
            return Err(FieldError::EmptyCoefficients);
        }
        let basis = ctx.subfield_basis(domain)?.to_vec();
        let columns: Vec<Vec<u32>> =
            basis.iter().map(|&b| ctx.coeffs(ctx.eval_additive(coeffs, b))).collect();
        let system = FpSystem::new(&FpMatrix::from_columns(ctx.p, ctx.degree as usize, &columns));
        let kernel = system.kernel_basis();
        Ok(Self { basis, system, kernel, p: ctx.p })
    }

    /// Number of solutions of `L(y) = 0` in the domain.
    pub fn kernel_size(&self) -> u128 {
        (self.p as u128).pow(self.kernel.len() as u32)
    }

    fn combine(&self, ctx: &FieldCtx, t: &[u32]) -> Felt {
        t.iter().zip(&self.basis).fold(Felt::ZERO, |acc, (&c, &b)| {
            if c == 0 {
                acc
            } else {
                ctx.add(acc, ctx.scalar(c as i64, b))
            }
        })
    }

    pub fn count(&self, ctx: &FieldCtx, rhs: Felt) -> u128 {
        if self.system.is_consistent(&ctx.coeffs(rhs)) {
            self.kernel_size()
        } else {
            0
        }
    }

    /// All `y` in the domain with `L(y) = rhs`, sorted.
    pub fn solve(&self, ctx: &FieldCtx, rhs: Felt) -> Vec<Felt> {
        let Some(t0) = self.system.solve(&ctx.coeffs(rhs)) else {
            return Vec::new();
        };
        let mut out: Vec<Felt> = span_with_offset(self.p, &t0, &self.kernel)
            .iter()
            .map(|t| self.combine(ctx, t))
            .collect();
        out.sort_unstable();
        out
    }

    /// The solutions of `L(y) = 0` in the domain, sorted.
    pub fn kernel(&self, ctx: &FieldCtx) -> Vec<Felt> {
        self.solve(ctx, Felt::ZERO)
    }
}

/// All `y ∈ F_{p^domain}` with `Σ c_i y^{p^i} = rhs`.
pub fn solve_linearized(
    ctx: &FieldCtx,
    coeffs: &[Felt],
    rhs: Felt,
    domain: u32,
) -> FieldResult<Vec<Felt>> {
    Ok(LinearizedSolver::new(ctx, coeffs, domain)?.solve(ctx, rhs))
}

#[cfg(test)]
mod tests;
