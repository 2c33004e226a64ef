//! Exact Gaussian elimination over cyclotomic fields.

use crate::cyclo::Cyclotomic;

/// Square or rectangular matrix, row-major.
pub type Matrix = Vec<Vec<Cyclotomic>>;

pub fn identity(n: usize, conductor: u32) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Cyclotomic::one(conductor) } else { Cyclotomic::zero(conductor) })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let conductor = a[0][0].conductor();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Cyclotomic::zero(conductor);
                    for l in 0..k {
                        if !a[i][l].is_zero() && !b[l][j].is_zero() {
                            acc = &acc + &(&a[i][l] * &b[l][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
    a.iter()
        .map(|row| {
            let mut acc = Cyclotomic::zero(v[0].conductor());
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(x * y);
                }
            }
            acc
        })
        .collect()
}

/// Reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("nonzero pivot");
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    if !m[r][j].is_zero() {
                        m[i][j] = &m[i][j] - &(&f * &m[r][j]);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Basis of the right kernel {x : m x = 0}.
pub fn nullspace(m: &Matrix) -> Vec<Vec<Cyclotomic>> {
    let cols = m.first().map_or(0, |r| r.len());
    let conductor = m[0][0].conductor();
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Cyclotomic::zero(conductor); cols];
            v[f] = Cyclotomic::one(conductor);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&work[r][f];
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let conductor = m[0][0].conductor();
    let id = identity(n, conductor);
    let mut aug: Matrix = m.iter().zip(&id).map(|(r, e)| r.iter().chain(e).cloned().collect()).collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Cyclotomic {
        Cyclotomic::from_int(1, v)
    }

    #[test]
    fn rank_and_kernel() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank(&m), 2);
        let k = nullspace(&m);
        assert_eq!(k.len(), 1);
        let image = mat_vec(&m, &k[0]);
        assert!(image.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2, 1));
        assert!(inverse(&vec![vec![q(1), q(1)], vec![q(1), q(1)]]).is_none());
    }
}
