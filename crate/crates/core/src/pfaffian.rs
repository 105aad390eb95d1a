//! Pfaffians over commutative rings, two-point functions of neutral fermions
//! and Wick evaluation of vacuum expectation values.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formal_group::oplus;
use crate::scalar::{CommutativeRing, Scalar};
use crate::series::{expand_ratio, LaurentPolynomial, NestedLaurentSeries, SeriesContext};

/// Antisymmetric matrix stored by its strict upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct AntisymmetricMatrix<T> {
    size: usize,
    upper: Vec<T>,
    one: T,
}

impl<T: CommutativeRing> AntisymmetricMatrix<T> {
    /// Builds from `f(i, j)` for `i < j`. `one` supplies the ring unit.
    pub fn from_fn<F: FnMut(usize, usize) -> T>(size: usize, one: T, mut f: F) -> Self {
        let mut upper = Vec::with_capacity(size * size.saturating_sub(1) / 2);
        for i in 0..size {
            for j in i + 1..size {
                upper.push(f(i, j));
            }
        }
        AntisymmetricMatrix { size, upper, one }
    }

    /// Builds from full rows, checking antisymmetry.
    pub fn from_rows(rows: &[Vec<T>], one: T) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("matrix is not square".into()));
        }
        for i in 0..n {
            if !rows[i][i].ring_is_zero() {
                return Err(Error::Shape("nonzero diagonal".into()));
            }
            for j in i + 1..n {
                if rows[i][j].ring_add(&rows[j][i]) != one.ring_zero_like() {
                    return Err(Error::Shape(format!("entries ({i},{j}) and ({j},{i}) are not opposite")));
                }
            }
        }
        Ok(Self::from_fn(n, one, |i, j| rows[i][j].clone()))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        i * (2 * self.size - i - 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.upper[self.index(i, j)].clone(),
            Greater => self.upper[self.index(j, i)].ring_neg(),
            Equal => self.one.ring_zero_like(),
        }
    }

    /// Sets `a_ij` (and implicitly `a_ji = -a_ij`).
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert_ne!(i, j, "diagonal entries are zero");
        if i < j {
            let k = self.index(i, j);
            self.upper[k] = v;
        } else {
            let k = self.index(j, i);
            self.upper[k] = v.ring_neg();
        }
    }

    /// Simultaneous swap of rows and columns `i` and `j`.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let perm = |k: usize| if k == i { j } else if k == j { i } else { k };
        Self::from_fn(self.size, self.one.clone(), |a, b| self.get(perm(a), perm(b)))
    }

    pub fn entries(&self) -> Vec<Vec<T>> {
        (0..self.size).map(|i| (0..self.size).map(|j| self.get(i, j)).collect()).collect()
    }
}

/// Pfaffian by first-row expansion with sub-Pfaffians memoized by index set.
pub fn pfaffian<T: CommutativeRing>(m: &AntisymmetricMatrix<T>) -> Result<T> {
    if m.size % 2 == 1 {
        return Err(Error::Shape(format!("Pfaffian of odd size {}", m.size)));
    }
    if m.size > 63 {
        return Err(Error::Shape("matrix too large".into()));
    }
    let mut memo: HashMap<u64, T> = HashMap::new();
    let full = if m.size == 0 { 0 } else { u64::MAX >> (64 - m.size) };
    Ok(sub_pfaffian(m, full, &mut memo))
}

fn sub_pfaffian<T: CommutativeRing>(m: &AntisymmetricMatrix<T>, set: u64, memo: &mut HashMap<u64, T>) -> T {
    if set == 0 {
        return m.one.clone();
    }
    if let Some(v) = memo.get(&set) {
        return v.clone();
    }
    let i = set.trailing_zeros() as usize;
    let rest = set & !(1u64 << i);
    let mut acc = m.one.ring_zero_like();
    let mut sign_positive = true;
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let a = m.get(i, j);
        if !a.ring_is_zero() {
            let minor = sub_pfaffian(m, rest & !(1u64 << j), memo);
            let term = a.ring_mul(&minor);
            acc = if sign_positive { acc.ring_add(&term) } else { acc.ring_sub(&term) };
        }
        sign_positive = !sign_positive;
    }
    memo.insert(set, acc.clone());
    acc
}

/// `<0| phi_m phi_n |0>`.
pub fn two_point<C: Scalar>(m: i64, n: i64) -> C {
    if m == 0 && n == 0 {
        C::one()
    } else if m + n == 0 && m < 0 {
        C::from_i64(if m % 2 == 0 { 2 } else { -2 })
    } else {
        C::zero()
    }
}

/// Vacuum expectation of a product of modes via Wick's theorem. Odd-length
/// products vanish by parity.
pub fn wick_vev<C: Scalar + CommutativeRing>(modes: &[i64]) -> C {
    if modes.len() % 2 == 1 {
        return C::zero();
    }
    let m = AntisymmetricMatrix::from_fn(modes.len(), C::one(), |i, j| two_point::<C>(modes[i], modes[j]));
    pfaffian(&m).expect("even size")
}

/// Matrix of expanded entries `(T_i - T_j) / (T_i (+) T_j)`.
pub fn schur_pfaffian_matrix<C: Scalar>(
    t: &[LaurentPolynomial<C>],
    ctx: &Arc<SeriesContext>,
) -> Result<AntisymmetricMatrix<NestedLaurentSeries<C>>> {
    let r = t.len();
    let mut entries = vec![Vec::new(); r];
    for i in 0..r {
        for j in i + 1..r {
            entries[i].push(expand_ratio(&t[i].sub(&t[j]), &oplus(&t[i], &t[j]), ctx)?);
        }
    }
    Ok(AntisymmetricMatrix::from_fn(r, ctx.one(), |i, j| entries[i][j - i - 1].clone()))
}

/// Expanded product over `i < j` of `(T_i - T_j) / (T_i (+) T_j)`.
pub fn schur_pfaffian_product<C: Scalar>(
    t: &[LaurentPolynomial<C>],
    ctx: &Arc<SeriesContext>,
) -> Result<NestedLaurentSeries<C>> {
    let mut acc = ctx.one();
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            acc = acc.try_mul(&expand_ratio(&t[i].sub(&t[j]), &oplus(&t[i], &t[j]), ctx)?)?;
        }
    }
    Ok(acc)
}

/// Whether the Pfaffian of the pair-factor matrix equals the product of its
/// entries' factors on the context's window. Both sides are built in a
/// context padded by the total window width, since partial products of the
/// product side may leave the window and return.
pub fn schur_pfaffian_identity_check<C: Scalar>(t: &[LaurentPolynomial<C>], ctx: &Arc<SeriesContext>) -> Result<bool> {
    if t.len() % 2 == 1 {
        return Err(Error::Shape("identity needs an even number of variables".into()));
    }
    let pad: i64 = ctx.windows().iter().map(|(lo, hi)| hi - lo).sum();
    let wide = Arc::new(ctx.widened(pad as u32));
    let pf = pfaffian(&schur_pfaffian_matrix(t, &wide)?)?;
    let prod = schur_pfaffian_product(t, &wide)?;
    let narrow = |s: NestedLaurentSeries<C>| NestedLaurentSeries::from_laurent(&s.to_laurent(), ctx);
    Ok(narrow(pf)? == narrow(prod)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type Q = Rational;

    #[test]
    fn small_pfaffians() {
        let m = AntisymmetricMatrix::from_fn(2, 1i64, |_, _| 7);
        assert_eq!(pfaffian(&m).unwrap(), 7);
        let a = [[0, 2, 3, 5], [0, 0, 7, 11], [0, 0, 0, 13]];
        let m = AntisymmetricMatrix::from_fn(4, 1i64, |i, j| a[i][j]);
        assert_eq!(pfaffian(&m).unwrap(), 2 * 13 - 3 * 11 + 5 * 7);
        let odd = AntisymmetricMatrix::from_fn(3, 1i64, |_, _| 1);
        assert!(pfaffian(&odd).is_err());
        let empty = AntisymmetricMatrix::from_fn(0, 1i64, |_, _| 0);
        assert_eq!(pfaffian(&empty).unwrap(), 1);
    }

    #[test]
    fn two_point_values() {
        assert_eq!(two_point::<Q>(0, 0), Q::from_i64(1));
        assert_eq!(two_point::<Q>(1, -1), Q::from_i64(0));
        assert_eq!(two_point::<Q>(-1, 1), Q::from_i64(-2));
        assert_eq!(two_point::<Q>(-2, 2), Q::from_i64(2));
    }

    #[test]
    fn wick_basics() {
        assert_eq!(wick_vev::<Q>(&[]), Q::from_i64(1));
        assert_eq!(wick_vev::<Q>(&[0, 0]), Q::from_i64(1));
        assert_eq!(wick_vev::<Q>(&[0]), Q::from_i64(0));
    }
}
