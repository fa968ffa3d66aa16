use num_traits::Num;

use crate::error::{Error, Result};

/// The 5×5 generating-function system `A(q, u)` at one point. Unknowns are
/// ordered `(●0, ●1, 02, 12, 22)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSystem<T> {
    pub q: T,
    pub u: T,
    pub a: [[T; 5]; 5],
}

/// Entries of `A(q, u)`.
pub fn matrix_entries<T: Clone + Num>(q: &T, u: &T) -> [[T; 5]; 5] {
    let z = T::zero;
    let three = T::one() + T::one() + T::one();
    let qu = q.clone() * u.clone();
    let u_q = u.clone() / q.clone();
    let u_q2 = u_q.clone() / q.clone();
    let q2u = q.clone() * qu.clone();
    let neg = |x: T| z() - x;
    [
        [three.clone() - u.clone(), neg(u_q.clone()), neg(qu.clone()), z(), z()],
        [neg(qu.clone()), three.clone() - u.clone(), z(), neg(u_q.clone()), z()],
        [neg(u_q.clone()), neg(u_q2), three.clone(), z(), neg(u.clone())],
        [neg(q2u), neg(qu.clone()), z(), three.clone(), neg(u.clone())],
        [neg(u_q), neg(qu), z(), z(), three - u.clone()],
    ]
}

/// Determinant by cofactor expansion along the first column (exact for
/// exact scalar types).
fn det<T: Clone + Num>(m: &[Vec<T>]) -> T {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = T::zero();
    for i in 0..n {
        if m[i][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<T>> = m.iter().enumerate().filter(|(r, _)| *r != i).map(|(_, row)| row[1..].to_vec()).collect();
        let term = m[i][0].clone() * det(&minor);
        acc = if i % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

fn rows<T: Clone>(a: &[[T; 5]; 5]) -> Vec<Vec<T>> {
    a.iter().map(|r| r.to_vec()).collect()
}

impl<T: Clone + Num> MatrixSystem<T> {
    pub fn new(q: T, u: T) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::invalid("q = 0 is a pole of A(q, u)"));
        }
        let a = matrix_entries(&q, &u);
        Ok(MatrixSystem { q, u, a })
    }

    pub fn det(&self) -> T {
        det(&rows(&self.a))
    }

    /// `det A_i`, the `(i, 1)` minor (rows and columns counted from 1).
    pub fn minor(&self, i: usize) -> T {
        let m: Vec<Vec<T>> =
            self.a.iter().enumerate().filter(|(r, _)| *r != i - 1).map(|(_, row)| row[1..].to_vec()).collect();
        det(&m)
    }

    pub fn minors(&self) -> [T; 5] {
        [self.minor(1), self.minor(2), self.minor(3), self.minor(4), self.minor(5)]
    }

    /// `q³ det A(q, u)`, a polynomial in `q` and `u`.
    pub fn cleared_det(&self) -> T {
        self.q.clone() * self.q.clone() * self.q.clone() * self.det()
    }
}

/// `matrix_A(q, u)` in floating point.
pub fn matrix_a(q: f64, u: f64) -> Result<MatrixSystem<f64>> {
    MatrixSystem::new(q, u)
}

/// Root `q⁻(u) ∈ (0, 1)` of `det A(q, u) = 0`, by 200 bisection steps on
/// `q³ det A`, which is negative near `q = 0` and equals `243(1−u) > 0` at `q = 1`.
pub fn find_q_minus(u: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::NoBracket(format!("u = {u} outside [0, 1)")));
    }
    let f = |q: f64| MatrixSystem::new(q, u).map(|m| m.cleared_det());
    let (mut lo, mut hi) = (1e-9f64, 1.0f64);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::NoBracket(format!("no sign change on (0, 1) at u = {u}: {flo}, {fhi}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
