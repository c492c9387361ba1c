//! Certified rank over ℚ(i) by elimination modulo inert primes.
//!
//! For `p ≡ 3 (mod 4)` the residue ring `ℤ[i]/p` is the field `𝔽_{p²}`, so a
//! Gaussian rational reduces to a pair of residues. Independence mod `p`
//! implies independence over ℚ(i), which gives a lower bound. The matching
//! upper bound comes from kernel vectors lifted by CRT and rational
//! reconstruction, then checked exactly.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::echelon::Echelon;
use super::rational::Rational;
use super::scalar::Gq;
use super::sparse::{axpy, SparseVec};

/// Primes tried before falling back to exact elimination.
const MAX_PRIMES: usize = 12;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for b in BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `≡ 3 (mod 4)` descending from `2^62`.
fn inert_primes() -> impl Iterator<Item = u64> {
    let start = (1u64 << 62) - 1;
    (0..).map(move |k| start - 4 * k).filter(|&n| is_prime(n))
}

/// An element `a + b·i` of `𝔽_{p²}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Fp2 {
    re: u64,
    im: u64,
}

struct Field {
    p: u64,
}

impl Field {
    fn is_zero(x: Fp2) -> bool {
        x.re == 0 && x.im == 0
    }

    fn add(&self, x: Fp2, y: Fp2) -> Fp2 {
        Fp2 {
            re: (x.re + y.re) % self.p,
            im: (x.im + y.im) % self.p,
        }
    }

    fn neg(&self, x: Fp2) -> Fp2 {
        Fp2 {
            re: (self.p - x.re) % self.p,
            im: (self.p - x.im) % self.p,
        }
    }

    fn mul(&self, x: Fp2, y: Fp2) -> Fp2 {
        let p = self.p;
        let rr = mul_mod(x.re, y.re, p);
        let ii = mul_mod(x.im, y.im, p);
        Fp2 {
            re: (rr + p - ii) % p,
            im: (mul_mod(x.re, y.im, p) + mul_mod(x.im, y.re, p)) % p,
        }
    }

    fn inv(&self, x: Fp2) -> Fp2 {
        let p = self.p;
        let n = (mul_mod(x.re, x.re, p) + mul_mod(x.im, x.im, p)) % p;
        let ni = pow_mod(n, p - 2, p);
        Fp2 {
            re: mul_mod(x.re, ni, p),
            im: mul_mod((p - x.im) % p, ni, p),
        }
    }

    fn reduce_rational(&self, r: &Rational) -> Option<u64> {
        let p = self.p;
        let (n, d) = match r {
            Rational::Small(n, d) => (n.rem_euclid(p as i64) as u64, d.rem_euclid(p as i64) as u64),
            Rational::Big(b) => (residue(b.numer(), p), residue(b.denom(), p)),
        };
        (d != 0).then(|| mul_mod(n, pow_mod(d, p - 2, p), p))
    }

    fn reduce(&self, x: &Gq) -> Option<Fp2> {
        Some(Fp2 {
            re: self.reduce_rational(&x.re)?,
            im: self.reduce_rational(&x.im)?,
        })
    }
}

fn residue(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

type ModVec = Vec<(usize, Fp2)>;

/// `a + f·b` on sorted sparse vectors mod p.
fn mod_axpy(field: &Field, a: &ModVec, f: Fp2, b: &ModVec) -> ModVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map_or(usize::MAX, |e| e.0);
        let kb = b.get(j).map_or(usize::MAX, |e| e.0);
        let (k, v) = if ka < kb {
            i += 1;
            (ka, a[i - 1].1)
        } else if kb < ka {
            j += 1;
            (kb, field.mul(f, b[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ka, field.add(a[i - 1].1, field.mul(f, b[j - 1].1)))
        };
        if !Field::is_zero(v) {
            out.push((k, v));
        }
    }
    out
}

/// One modular elimination: the dependent columns and, for each, the
/// coefficients expressing it through earlier independent columns.
struct ModRun {
    rank: usize,
    dependent: Vec<usize>,
    kernel: Vec<ModVec>,
}

fn eliminate(field: &Field, cols: &[SparseVec]) -> Option<ModRun> {
    let mut reduced = Vec::with_capacity(cols.len());
    for c in cols {
        let mut v = Vec::with_capacity(c.len());
        for (k, x) in c {
            let r = field.reduce(x)?;
            if !Field::is_zero(r) {
                v.push((*k, r));
            }
        }
        reduced.push(v);
    }
    // Pivot rows are normalized to leading entry 1 and carry their combination
    // of original columns.
    let mut pivots: std::collections::HashMap<usize, (ModVec, ModVec)> = Default::default();
    let mut dependent = Vec::new();
    let mut kernel = Vec::new();
    for (j, mut v) in reduced.into_iter().enumerate() {
        let mut combo: ModVec = vec![(j, Fp2 { re: 1, im: 0 })];
        while let Some(&(lead, x)) = v.first() {
            match pivots.get(&lead) {
                Some((pv, pc)) => {
                    let f = field.neg(x);
                    v = mod_axpy(field, &v, f, pv);
                    combo = mod_axpy(field, &combo, f, pc);
                }
                None => break,
            }
        }
        match v.first() {
            None => {
                dependent.push(j);
                kernel.push(combo);
            }
            Some(&(lead, x)) => {
                let inv = field.inv(x);
                let scale = |w: &ModVec| w.iter().map(|(k, y)| (*k, field.mul(inv, *y))).collect::<ModVec>();
                pivots.insert(lead, (scale(&v), scale(&combo)));
            }
        }
    }
    Some(ModRun {
        rank: cols.len() - dependent.len(),
        dependent,
        kernel,
    })
}

/// Residues of one kernel vector accumulated over several primes.
#[derive(Clone)]
struct Lift {
    entries: Vec<(usize, BigInt, BigInt)>,
}

fn crt(a: &BigInt, m: &BigInt, b: u64, p: u64) -> BigInt {
    // x ≡ a (mod m), x ≡ b (mod p)
    let pb = BigInt::from(p);
    let m_mod_p = residue(m, p);
    let a_mod_p = residue(a, p);
    let diff = (b + p - a_mod_p) % p;
    let t = mul_mod(diff, pow_mod(m_mod_p, p - 2, p), p);
    let x = a + m * BigInt::from(t);
    x.mod_floor(&(m * &pb))
}

/// Smallest `n/d` with `n ≡ d·a (mod m)`, `|n|, d ≤ √(m/2)`.
fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    Some(Rational::from_bigints(n, d))
}

fn reconstruct(lift: &Lift, m: &BigInt) -> Option<SparseVec> {
    let mut out = Vec::with_capacity(lift.entries.len());
    for (k, re, im) in &lift.entries {
        let x = Gq::new(rational_reconstruct(re, m)?, rational_reconstruct(im, m)?);
        if !x.is_zero() {
            out.push((*k, x));
        }
    }
    Some(out)
}

fn is_kernel_vector(cols: &[SparseVec], x: &SparseVec) -> bool {
    let mut acc: SparseVec = Vec::new();
    for (j, c) in x {
        acc = axpy(&acc, c, &cols[*j]);
    }
    acc.is_empty()
}

/// Exact rank of a list of sparse vectors over ℚ(i).
pub fn rank_of(vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let cols: Vec<SparseVec> = vectors.into_iter().filter(|v| !v.is_empty()).collect();
    if cols.len() <= 1 {
        return cols.len();
    }
    let mut state: Option<(ModRun, Vec<Lift>, BigInt)> = None;
    for p in inert_primes().take(MAX_PRIMES) {
        let field = Field { p };
        let Some(run) = eliminate(&field, &cols) else {
            continue;
        };
        if run.dependent.is_empty() {
            return run.rank;
        }
        let fresh = |run: &ModRun| -> Vec<Lift> {
            run.kernel
                .iter()
                .map(|v| Lift {
                    entries: v
                        .iter()
                        .map(|(k, x)| (*k, BigInt::from(x.re), BigInt::from(x.im)))
                        .collect(),
                })
                .collect()
        };
        let (prev, lifts, modulus) = match state.take() {
            // A larger rank exposes the earlier primes as unlucky.
            Some((prev, lifts, m)) if prev.rank == run.rank && prev.dependent == run.dependent => {
                let support_matches = prev
                    .kernel
                    .iter()
                    .zip(&run.kernel)
                    .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.0 == y.0));
                if support_matches {
                    let merged = lifts
                        .iter()
                        .zip(&run.kernel)
                        .map(|(l, v)| Lift {
                            entries: l
                                .entries
                                .iter()
                                .zip(v)
                                .map(|((k, re, im), (_, x))| (*k, crt(re, &m, x.re, p), crt(im, &m, x.im, p)))
                                .collect(),
                        })
                        .collect();
                    (run, merged, m * BigInt::from(p))
                } else {
                    let l = fresh(&run);
                    (run, l, BigInt::from(p))
                }
            }
            Some((prev, lifts, m)) if prev.rank > run.rank => (prev, lifts, m),
            _ => {
                let l = fresh(&run);
                (run, l, BigInt::from(p))
            }
        };
        let certified = lifts.iter().all(|l| {
            reconstruct(l, &modulus).is_some_and(|x| is_kernel_vector(&cols, &x))
        });
        if certified {
            return prev.rank;
        }
        state = Some((prev, lifts, modulus));
    }
    let mut e = Echelon::new();
    for v in cols {
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[(i64, i64)]) -> SparseVec {
        v.iter()
            .enumerate()
            .filter(|(_, x)| **x != (0, 0))
            .map(|(k, (a, b))| (k, Gq::new(Rational::from_int(*a), Rational::from_int(*b))))
            .collect()
    }

    #[test]
    fn primes_are_inert() {
        for p in inert_primes().take(3) {
            assert_eq!(p % 4, 3);
            assert!(p > 1 << 61);
        }
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(2_305_843_009_213_693_953));
    }

    #[test]
    fn field_inverse() {
        let f = Field { p: inert_primes().next().unwrap() };
        let x = Fp2 { re: 3, im: 5 };
        assert_eq!(f.mul(x, f.inv(x)), Fp2 { re: 1, im: 0 });
    }

    #[test]
    fn reconstruction_round_trip() {
        let p = inert_primes().next().unwrap();
        let field = Field { p };
        let r = Rational::new(-7, 12);
        let x = field.reduce_rational(&r).unwrap();
        assert_eq!(rational_reconstruct(&BigInt::from(x), &BigInt::from(p)), Some(r));
    }

    #[test]
    fn gaussian_dependence() {
        // (1, i), i·(1, i), (i, 1)
        let cols = vec![sv(&[(1, 0), (0, 1)]), sv(&[(0, 1), (-1, 0)]), sv(&[(0, 1), (1, 0)])];
        assert_eq!(rank_of(cols), 2);
    }

    #[test]
    fn agrees_with_exact_elimination() {
        let cols = vec![
            vec![(0, Gq::from_ratio(1, 3)), (2, Gq::i())],
            vec![(1, Gq::from_int(2)), (2, Gq::from_ratio(-5, 7))],
            vec![(0, Gq::from_ratio(2, 3)), (1, Gq::from_int(4)), (2, &Gq::i() * &Gq::from_int(2)) ],
            vec![(0, Gq::one()), (1, Gq::one()), (2, Gq::one())],
        ];
        let mut e = Echelon::new();
        for c in cols.clone() {
            e.insert(c);
        }
        assert_eq!(rank_of(cols), e.rank());
    }
}
