//! Numerical semigroups, telescopic sequences and their genus.

use serde::Serialize;
use thiserror::Error;

use crate::models::{genus_formula, Family, ModelError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("generators must be nonempty and positive")]
    Empty,
    #[error("generators have gcd {0}, not 1")]
    NotCoprime(u64),
    #[error("sequence is not telescopic")]
    NotTelescopic,
    #[error("l_g = {0} is even")]
    Parity(i64),
    #[error("no generators are known at infinity for {0}")]
    Unsupported(Family),
    #[error("gap search bound {0} is too large")]
    TooLarge(u64),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub type SemigroupResult<T> = Result<T, SemigroupError>;

const MAX_SEARCH: u64 = 1 << 26;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_all(xs: &[u64]) -> u64 {
    xs.iter().fold(0, |g, &x| gcd(g, x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumSemigroup {
    pub generators: Vec<u64>,
    pub gaps: Vec<u64>,
    pub genus: u64,
    /// Least `c` with every `n >= c` a member.
    pub conductor: u64,
}

impl NumSemigroup {
    pub fn from_generators(gens: &[u64]) -> SemigroupResult<Self> {
        if gens.is_empty() || gens.contains(&0) {
            return Err(SemigroupError::Empty);
        }
        let d = gcd_all(gens);
        if d != 1 {
            return Err(SemigroupError::NotCoprime(d));
        }
        let mut generators = gens.to_vec();
        generators.sort_unstable();
        generators.dedup();
        let top = *generators.last().expect("nonempty");
        let bound = top * top + 1;
        if bound > MAX_SEARCH {
            return Err(SemigroupError::TooLarge(bound));
        }
        let mut member = vec![false; bound as usize + 1];
        member[0] = true;
        for n in 1..=bound as usize {
            member[n] = generators.iter().any(|&g| g as usize <= n && member[n - g as usize]);
        }
        let gaps: Vec<u64> = (1..=bound).filter(|&n| !member[n as usize]).collect();
        let conductor = gaps.last().map_or(0, |g| g + 1);
        Ok(NumSemigroup { genus: gaps.len() as u64, conductor, gaps, generators })
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.conductor || self.gaps.binary_search(&n).is_err()
    }

    /// Members below `limit`.
    pub fn elements_below(&self, limit: u64) -> Vec<u64> {
        (0..limit).filter(|&n| self.contains(n)).collect()
    }
}

/// Membership in the semigroup generated by `gens`, which need not be coprime.
fn in_span(gens: &[u64], n: u64) -> bool {
    let mut reach = vec![false; n as usize + 1];
    reach[0] = true;
    for m in 1..=n as usize {
        reach[m] = gens.iter().any(|&g| g as usize <= m && reach[m - g as usize]);
    }
    reach[n as usize]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TelescopicStep {
    pub i: usize,
    pub d: u64,
    /// `A_i = (a_1/d_i, ..., a_i/d_i)`.
    pub a: Vec<u64>,
    /// Whether `a_i/d_i ∈ S_{i-1}`; `None` for `i = 1`.
    pub member: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TelescopicTrace {
    pub sequence: Vec<u64>,
    pub steps: Vec<TelescopicStep>,
    pub telescopic: bool,
}

pub fn is_telescopic(seq: &[u64]) -> SemigroupResult<TelescopicTrace> {
    if seq.is_empty() || seq.contains(&0) {
        return Err(SemigroupError::Empty);
    }
    let d = gcd_all(seq);
    if d != 1 {
        return Err(SemigroupError::NotCoprime(d));
    }
    let mut steps = Vec::with_capacity(seq.len());
    for i in 1..=seq.len() {
        let di = gcd_all(&seq[..i]);
        let member = (i > 1).then(|| {
            let prev = gcd_all(&seq[..i - 1]);
            let s_prev: Vec<u64> = seq[..i - 1].iter().map(|a| a / prev).collect();
            in_span(&s_prev, seq[i - 1] / di)
        });
        steps.push(TelescopicStep { i, d: di, a: seq[..i].iter().map(|a| a / di).collect(), member });
    }
    let telescopic = steps.iter().all(|s| s.member != Some(false));
    Ok(TelescopicTrace { sequence: seq.to_vec(), steps, telescopic })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TelescopicGenus {
    pub l_g: i64,
    pub genus: u64,
    /// The same sum with `a_1` in place of `a_i`.
    pub l_g_with_a1: i64,
}

/// `l_g = -a_1 + Σ_{i>=2} (d_{i-1}/d_i - 1) a_i` and `g = (l_g + 1)/2`.
pub fn telescopic_genus(seq: &[u64]) -> SemigroupResult<TelescopicGenus> {
    let trace = is_telescopic(seq)?;
    if !trace.telescopic {
        return Err(SemigroupError::NotTelescopic);
    }
    let mut l_g = -(seq[0] as i64);
    let mut l_g_with_a1 = -(seq[0] as i64);
    for i in 1..seq.len() {
        let ratio = (trace.steps[i - 1].d / trace.steps[i].d) as i64 - 1;
        l_g += ratio * seq[i] as i64;
        l_g_with_a1 += ratio * seq[0] as i64;
    }
    if l_g.rem_euclid(2) == 0 {
        return Err(SemigroupError::Parity(l_g));
    }
    Ok(TelescopicGenus { l_g, genus: ((l_g + 1) / 2) as u64, l_g_with_a1 })
}

/// The Weierstrass semigroup at the place at infinity for families I and II.
pub fn semigroup_at_infinity(family: Family, p: u32, h: u32) -> SemigroupResult<NumSemigroup> {
    let genus = genus_formula(family, p, h)?;
    let (p, q) = (p as u64, (p as u64).pow(h));
    let gens = match family {
        Family::FamilyI => vec![p.pow(h - 2), q + 1],
        Family::FamilyII => vec![q / p, q / p + q / (p * p), q + 1],
        other => return Err(SemigroupError::Unsupported(other)),
    };
    let s = NumSemigroup::from_generators(&gens)?;
    debug_assert_eq!(s.genus, genus);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_semigroups() {
        assert_eq!(NumSemigroup::from_generators(&[1]).unwrap().genus, 0);
        let s = NumSemigroup::from_generators(&[2, 9]).unwrap();
        assert_eq!((s.gaps.clone(), s.genus, s.conductor), (vec![1, 3, 5, 7], 4, 8));
        let s = NumSemigroup::from_generators(&[10, 3, 4]).unwrap();
        assert_eq!((s.gaps.clone(), s.genus), (vec![1, 2, 5], 3));
        assert_eq!(NumSemigroup::from_generators(&[4, 6]), Err(SemigroupError::NotCoprime(2)));
        assert!(NumSemigroup::from_generators(&[]).is_err());
    }

    #[test]
    fn telescopic_examples() {
        assert!(is_telescopic(&[3, 4, 10]).unwrap().telescopic);
        assert!(is_telescopic(&[2, 9]).unwrap().telescopic);
        assert!(is_telescopic(&[5, 7]).unwrap().telescopic);
        // 7 is not in <3, 5>
        assert!(!is_telescopic(&[3, 5, 7]).unwrap().telescopic);
        assert!(telescopic_genus(&[3, 5, 7]).is_err());

        let t = telescopic_genus(&[3, 4, 10]).unwrap();
        assert_eq!((t.l_g, t.genus), (5, 3));
        assert_eq!(t.l_g_with_a1, 3);
        assert_eq!(telescopic_genus(&[2, 9]).unwrap().l_g, 7);
        assert_eq!(telescopic_genus(&[3, 28]).unwrap().genus, 27);
    }

    #[test]
    fn semigroups_at_infinity() {
        let s = semigroup_at_infinity(Family::FamilyI, 2, 3).unwrap();
        assert_eq!((s.generators.clone(), s.genus), (vec![2, 9], 4));
        let s = semigroup_at_infinity(Family::FamilyII, 3, 2).unwrap();
        assert_eq!((s.generators.clone(), s.genus), (vec![3, 4, 10], 3));
        assert_eq!(semigroup_at_infinity(Family::FamilyIII, 2, 3), Err(SemigroupError::Unsupported(Family::FamilyIII)));
        for (p, h) in [(2, 3), (2, 4), (2, 5), (3, 3), (5, 3), (3, 4)] {
            let s = semigroup_at_infinity(Family::FamilyI, p, h).unwrap();
            assert_eq!(s.genus, genus_formula(Family::FamilyI, p, h).unwrap());
            assert_eq!(telescopic_genus(&s.generators).unwrap().genus, s.genus);
        }
        for (p, h) in [(3, 2), (3, 3), (5, 2), (7, 2)] {
            let s = semigroup_at_infinity(Family::FamilyII, p, h).unwrap();
            assert_eq!(s.genus, genus_formula(Family::FamilyII, p, h).unwrap());
            let q = (p as u64).pow(h);
            let seq = [q / p as u64, q / p as u64 + q / (p * p) as u64, q + 1];
            assert_eq!(telescopic_genus(&seq).unwrap().genus, s.genus);
        }
    }

    proptest! {
        #[test]
        fn two_generator_genus(a in 2u64..40, b in 2u64..40) {
            prop_assume!(gcd(a, b) == 1);
            let s = NumSemigroup::from_generators(&[a, b]).unwrap();
            prop_assert_eq!(s.genus, (a - 1) * (b - 1) / 2);
            prop_assert_eq!(telescopic_genus(&[a, b]).unwrap().genus, s.genus);
        }

        #[test]
        fn closed_under_addition(gens in prop::collection::vec(2u64..25, 2..4)) {
            prop_assume!(gcd_all(&gens) == 1);
            let s = NumSemigroup::from_generators(&gens).unwrap();
            let limit = s.conductor + gens.iter().max().unwrap();
            let els = s.elements_below(limit);
            for &x in &els {
                for &y in &els {
                    prop_assert!(s.contains(x + y));
                }
            }
            prop_assert_eq!(s.genus as usize, s.gaps.len());
        }

        #[test]
        fn telescopic_formula_matches_gaps(a in 1u64..6, b in 1u64..6, c in 2u64..30) {
            let seq = [a * b * 2, a * 3, c];
            prop_assume!(gcd_all(&seq) == 1);
            let t = is_telescopic(&seq).unwrap();
            prop_assume!(t.telescopic);
            prop_assert_eq!(
                telescopic_genus(&seq).unwrap().genus,
                NumSemigroup::from_generators(&seq).unwrap().genus
            );
        }
    }
}
