//! Reduced row echelon forms over `Q` through word-size primes.
//!
//! The rows are reduced modulo a sequence of primes, the residues of the
//! echelon entries are combined by the Chinese remainder theorem, and
//! candidates are recovered by rational reconstruction. A candidate is only
//! accepted after an exact check that every input row is the combination of
//! candidate rows read off at the pivots. Since the rank modulo a prime never
//! exceeds the rank over `Q`, that check proves the candidate is the reduced
//! row echelon form.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Enough for coefficients of several thousand digits.
const MAX_PRIMES: usize = 4096;

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(MAX_PRIMES);
        let mut c: u64 = (1 << 31) - 1;
        while out.len() < MAX_PRIMES {
            if is_prime(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime below `2^31`.
fn inverse(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Input rows scaled to integer rows, which keeps the row space.
enum IntegerRows {
    Small(Vec<Vec<i64>>),
    Big(Vec<Vec<BigInt>>),
}

impl IntegerRows {
    fn new(rows: &[Vec<Rational>]) -> Self {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| integral(r).0).collect();
        let small: Option<Vec<Vec<i64>>> = big.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect();
        match small {
            Some(s) => IntegerRows::Small(s),
            None => IntegerRows::Big(big),
        }
    }

    fn reduce(&self, p: u64) -> Vec<Vec<u64>> {
        match self {
            IntegerRows::Small(rows) => rows
                .iter()
                .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
                .collect(),
            IntegerRows::Big(rows) => {
                let pb = BigInt::from(p);
                rows.iter()
                    .map(|r| {
                        r.iter()
                            .map(|x| x.mod_floor(&pb).to_u64().expect("residue fits"))
                            .collect()
                    })
                    .collect()
            }
        }
    }

    fn row(&self, i: usize) -> Vec<BigInt> {
        match self {
            IntegerRows::Small(rows) => rows[i].iter().map(|&x| BigInt::from(x)).collect(),
            IntegerRows::Big(rows) => rows[i].clone(),
        }
    }

    fn len(&self) -> usize {
        match self {
            IntegerRows::Small(rows) => rows.len(),
            IntegerRows::Big(rows) => rows.len(),
        }
    }
}

/// Reduced row echelon form modulo `p` of rows already reduced mod `p`.
fn rref_mod(mut m: Vec<Vec<u64>>, cols: usize, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == nrows {
            break;
        }
        let Some(found) = (rank..nrows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, found);
        let inv = inverse(m[rank][col], p);
        for x in &mut m[rank][col..] {
            *x = *x * inv % p;
        }
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            let f = row[col];
            if f == 0 {
                continue;
            }
            let g = p - f;
            for (x, &y) in row[col..].iter_mut().zip(&pivot[col..]) {
                if y != 0 {
                    *x = (*x + g * y) % p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);
    // back substitution
    for i in (0..rank).rev() {
        let (head, tail) = m.split_at_mut(i);
        let pivot = &tail[0];
        let col = pivots[i];
        for row in head.iter_mut() {
            let f = row[col];
            if f == 0 {
                continue;
            }
            let g = p - f;
            for (x, &y) in row[col..].iter_mut().zip(&pivot[col..]) {
                if y != 0 {
                    *x = (*x + g * y) % p;
                }
            }
        }
    }
    (m, pivots)
}

/// A matrix over `Z/p` for one of a fixed list of word-size primes. Rows
/// reduced from rational rows are first scaled to integers, so the rank of
/// a reduction never exceeds the rank over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    p: u64,
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl ModMatrix {
    /// Reduction modulo the `i`-th prime; `None` past the end of the list.
    pub fn reduce(rows: &[Vec<Rational>], cols: usize, i: usize) -> Option<Self> {
        let p = *primes().get(i)?;
        Some(ModMatrix {
            p,
            cols,
            rows: IntegerRows::new(rows).reduce(p),
        })
    }

    /// Rows given by residues modulo `p`, which must be below `p`.
    pub fn from_residues(p: u64, cols: usize, rows: Vec<Vec<u64>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols && r.iter().all(|&x| x < p)));
        ModMatrix { p, cols, rows }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        rref_mod(self.rows.clone(), self.cols, self.p).1.len()
    }

    /// A basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let (r, pivots) = rref_mod(self.rows.clone(), self.cols, p);
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0; self.cols];
                v[f] = 1;
                for (row, &pc) in r.iter().zip(&pivots) {
                    v[pc] = (p - row[f]) % p;
                }
                v
            })
            .collect()
    }
}

/// Residues of the non-pivot entries of a candidate echelon form, combined
/// over the primes seen so far.
struct Accumulator {
    pivots: Vec<usize>,
    /// `(row, col)` positions right of each pivot, outside pivot columns.
    positions: Vec<(usize, usize)>,
    values: Vec<BigInt>,
    modulus: BigInt,
    primes_used: usize,
}

/// Echelon entries `nums / den` at the accumulator positions.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Candidate {
    den: BigInt,
    nums: Vec<BigInt>,
}

impl Accumulator {
    fn new(rows: &[Vec<u64>], pivots: Vec<usize>, cols: usize, p: u64) -> Self {
        let mut is_pivot = vec![false; cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut positions = Vec::new();
        for (i, &pc) in pivots.iter().enumerate() {
            for (j, &pivot_col) in is_pivot.iter().enumerate().skip(pc + 1) {
                if !pivot_col {
                    positions.push((i, j));
                }
            }
        }
        let values = positions.iter().map(|&(i, j)| BigInt::from(rows[i][j])).collect();
        Accumulator {
            pivots,
            positions,
            values,
            modulus: BigInt::from(p),
            primes_used: 1,
        }
    }

    fn absorb(&mut self, rows: &[Vec<u64>], p: u64) {
        let pb = BigInt::from(p);
        let m_mod_p = (&self.modulus % &pb).to_u64().expect("residue fits");
        let m_inv = inverse(m_mod_p, p);
        for (v, &(i, j)) in self.values.iter_mut().zip(&self.positions) {
            let a = (&*v % &pb).to_u64().expect("residue fits");
            let b = rows[i][j];
            let t = (b + p - a) % p * m_inv % p;
            if t != 0 {
                *v += &self.modulus * t;
            }
        }
        self.modulus *= pb;
        self.primes_used += 1;
    }

    /// Candidate entries over one common denominator, built up by
    /// reconstructing only the entries the running denominator misses.
    fn reconstruct(&self) -> Option<Candidate> {
        let bound = (&self.modulus >> 1usize).sqrt();
        let mut den = BigInt::one();
        for v in &self.values {
            if v.is_zero() {
                continue;
            }
            let scaled = symmetric(&(v * &den).mod_floor(&self.modulus), &self.modulus);
            if scaled.abs() > bound {
                let (_, d) = rational_reconstruct(v, &self.modulus, &bound)?;
                den = den.lcm(&d);
                // a genuine common denominator obeys the same bound
                if den > bound {
                    return None;
                }
            }
        }
        let mut nums = Vec::with_capacity(self.values.len());
        for v in &self.values {
            let n = symmetric(&(v * &den).mod_floor(&self.modulus), &self.modulus);
            if n.abs() > bound {
                return None;
            }
            nums.push(n);
        }
        Some(Candidate { den, nums })
    }
}

impl Candidate {
    /// Whether the candidate reduces to the given echelon form modulo `p`.
    fn consistent(&self, positions: &[(usize, usize)], rows: &[Vec<u64>], p: u64) -> bool {
        let pb = BigInt::from(p);
        let d = self.den.mod_floor(&pb).to_u64().expect("residue fits");
        self.nums.iter().zip(positions).all(|(n, &(i, j))| {
            n.mod_floor(&pb).to_u64().expect("residue fits") == d * rows[i][j] % p
        })
    }

    fn into_rows(self, pivots: &[usize], positions: &[(usize, usize)], cols: usize) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); cols]; pivots.len()];
        for (i, &c) in pivots.iter().enumerate() {
            out[i][c] = Rational::one();
        }
        for (n, &(i, j)) in self.nums.into_iter().zip(positions) {
            if !n.is_zero() {
                out[i][j] = Rational::from_bigints(n, self.den.clone());
            }
        }
        out
    }
}

fn symmetric(v: &BigInt, m: &BigInt) -> BigInt {
    if v * 2 > *m {
        v - m
    } else {
        v.clone()
    }
}

/// `n / d` with `|n|, d <= bound` and `n = d u (mod m)`.
fn rational_reconstruct(u: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > *bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.is_negative() {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

/// Integer numerators of `v` over their least common denominator.
fn integral(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = v.iter().fold(BigInt::one(), |acc, x| {
        if x.is_integer() {
            acc
        } else {
            acc.lcm(&x.denom())
        }
    });
    let nums = v
        .iter()
        .map(|x| {
            if x.is_zero() {
                BigInt::zero()
            } else {
                x.numer() * (&den / x.denom())
            }
        })
        .collect();
    (nums, den)
}

/// Whether every input row equals the combination of candidate rows given
/// by its entries in the pivot columns: `sum_i a[p_i] N_i[j] = den a[j]`
/// for every non-pivot column `j`.
fn verify(rows: &IntegerRows, c: &Candidate, pivots: &[usize], positions: &[(usize, usize)], cols: usize) -> bool {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&j| !is_pivot[j]).collect();
    if free.is_empty() {
        return true;
    }
    let mut slot = vec![usize::MAX; cols];
    for (k, &j) in free.iter().enumerate() {
        slot[j] = k;
    }
    let mut dense = vec![vec![BigInt::zero(); free.len()]; pivots.len()];
    for (n, &(i, j)) in c.nums.iter().zip(positions) {
        dense[i][slot[j]] = n.clone();
    }
    let mut acc = vec![BigInt::zero(); free.len()];
    for r in 0..rows.len() {
        let a = rows.row(r);
        for x in acc.iter_mut() {
            x.set_zero();
        }
        for (i, &p) in pivots.iter().enumerate() {
            if a[p].is_zero() {
                continue;
            }
            for (x, y) in acc.iter_mut().zip(&dense[i]) {
                if !y.is_zero() {
                    *x += &a[p] * y;
                }
            }
        }
        for (x, &j) in acc.iter().zip(&free) {
            if *x != &a[j] * &c.den {
                return false;
            }
        }
    }
    true
}

/// Lexicographic comparison of echelon shapes: more pivots, then earlier
/// pivots, is better. Reductions modulo unlucky primes are worse.
fn better(a: &[usize], b: &[usize]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a < b)
}

/// Reduced row echelon form of the nonzero part, or `None` if the prime
/// budget ran out.
pub(crate) fn rref(rows: &[Vec<Rational>], cols: usize) -> Option<(Vec<Vec<Rational>>, Vec<usize>)> {
    let input = IntegerRows::new(rows);
    let mut acc: Option<Accumulator> = None;
    let mut next_attempt = 1;
    let mut candidate: Option<Candidate> = None;

    for &p in primes() {
        let (red, piv) = rref_mod(input.reduce(p), cols, p);
        let a = match &mut acc {
            Some(a) if a.pivots == piv => {
                // check a candidate against a prime it has not seen, then exactly
                if let Some(c) = candidate.take() {
                    if c.consistent(&a.positions, &red, p) && verify(&input, &c, &a.pivots, &a.positions, cols) {
                        return Some((c.into_rows(&a.pivots, &a.positions, cols), a.pivots.clone()));
                    }
                }
                a.absorb(&red, p);
                a
            }
            Some(a) if !better(&piv, &a.pivots) => continue,
            _ => {
                next_attempt = 1;
                candidate = None;
                acc.insert(Accumulator::new(&red, piv, cols, p))
            }
        };
        if a.primes_used < next_attempt {
            continue;
        }
        next_attempt = a.primes_used + (a.primes_used / 4).max(1);
        candidate = a.reconstruct();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_table() {
        let ps = primes();
        assert_eq!(ps[0], 2147483647);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps[..20].iter().all(|&p| is_prime(p)));
        assert!(!is_prime(2147483649));
    }

    #[test]
    fn reconstructs_fractions() {
        let m = BigInt::from(2147483647u64) * BigInt::from(2147483629u64);
        let bound = (&m >> 1usize).sqrt();
        // -7/3 is the residue u with 3u = -7
        let u: BigInt = (0u64..3)
            .map(|k| &m * BigInt::from(k) - 7)
            .find(|v: &BigInt| v.mod_floor(&BigInt::from(3)).is_zero())
            .unwrap()
            / 3;
        let (n, d) = rational_reconstruct(&u, &m, &bound).unwrap();
        assert_eq!((n, d), (BigInt::from(-7), BigInt::from(3)));
    }

    #[test]
    fn agrees_with_direct_elimination() {
        let rows: Vec<Vec<Rational>> = (0..12)
            .map(|i: i64| {
                (0..9)
                    .map(|j: i64| Rational::new((i * 7 + j * j * 3 + i * j) % 11 - 5, (i + j) % 4 + 1))
                    .collect()
            })
            .collect();
        let mut dependent = rows.clone();
        for r in dependent.iter_mut().skip(6) {
            *r = vec![Rational::zero(); 9];
        }
        for input in [rows, dependent] {
            let (direct, dp) = super::super::matrix::rref_direct(input.clone(), 9);
            let (modular, mp) = rref(&input, 9).unwrap();
            assert_eq!(dp, mp);
            assert_eq!(&direct[..dp.len()], &modular[..]);
        }
    }

    #[test]
    fn large_heights_need_many_primes() {
        // Hilbert-type rows plus combinations of them; the echelon form has
        // entries far beyond one word
        let base: Vec<Vec<Rational>> = (0..9)
            .map(|i: i64| (0..14).map(|j: i64| Rational::new(1, i + j + 1).pow(3)).collect())
            .collect();
        let mut rows = base.clone();
        for k in 0..4 {
            let mix: Vec<Rational> = (0..14)
                .map(|j| &(&base[k][j] * &Rational::from_int(k as i64 + 2)) - &base[k + 3][j])
                .collect();
            rows.push(mix);
        }
        let (direct, dp) = super::super::matrix::rref_direct(rows.clone(), 14);
        let (modular, mp) = rref(&rows, 14).unwrap();
        assert_eq!(dp, mp);
        assert_eq!(&direct[..dp.len()], &modular[..]);
        assert!(modular.iter().flatten().any(|x| x.denom().bits() > 64));
    }

    #[test]
    fn modular_kernel_and_rank() {
        let rows: Vec<Vec<Rational>> = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 5]]
            .iter()
            .map(|r| r.iter().map(|&x| Rational::new(x, 3)).collect())
            .collect();
        let m = ModMatrix::reduce(&rows, 4, 0).unwrap();
        assert_eq!(m.rank(), 2);
        let p = m.prime();
        let kernel = m.kernel();
        assert_eq!(kernel.len(), 2);
        for v in &kernel {
            for r in m.rows() {
                let s = r.iter().zip(v).fold(0, |acc, (&a, &b)| (acc + a * b) % p);
                assert_eq!(s, 0);
            }
        }
        assert!(ModMatrix::reduce(&rows, 4, usize::MAX).is_none());
    }
}
