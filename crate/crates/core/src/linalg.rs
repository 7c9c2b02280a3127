//! Dense Gaussian elimination over an exact field.
//!
//! Pivots are chosen by smallest `Field::weight` within the column, which for
//! `q`-rational entries means lowest degree first; this keeps intermediate
//! rational functions small.

use crate::field::Field;

pub type Matrix<F> = Vec<Vec<F>>;

fn pick_pivot<F: Field>(m: &Matrix<F>, col: usize, from: usize) -> Option<usize> {
    (from..m.len())
        .filter(|&r| !m[r][col].is_zero())
        .min_by_key(|&r| m[r][col].weight())
}

fn eliminate_below<F: Field>(m: &mut Matrix<F>, row: usize, col: usize, from: usize, to: usize) {
    let inv = m[row][col].inverse().expect("nonzero pivot");
    let pivot_row = m[row].clone();
    for r in from..to {
        if r == row || m[r][col].is_zero() {
            continue;
        }
        let factor = m[r][col].times(&inv);
        for (c, p) in pivot_row.iter().enumerate().skip(col) {
            if !p.is_zero() {
                m[r][c] = m[r][c].minus(&factor.times(p));
            }
        }
    }
}

/// Reduces `m` in place to reduced row echelon form and returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pick_pivot(m, c, r) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("nonzero pivot");
        for x in m[r].iter_mut().skip(c) {
            if !x.is_zero() {
                *x = x.times(&inv);
            }
        }
        eliminate_below(m, r, c, 0, rows);
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pick_pivot(&a, c, r) else { continue };
        a.swap(r, p);
        eliminate_below(&mut a, r, c, r + 1, rows);
        r += 1;
    }
    r
}

/// Basis of the right kernel `{v : m·v = 0}`, returned as the rows of a
/// matrix in reduced row echelon form. `zero` supplies the field's zero when
/// `m` has no rows.
pub fn kernel<F: Field>(m: &Matrix<F>, cols: usize, zero: &F) -> Matrix<F> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Matrix<F> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![zero.clone(); cols];
            v[fc] = zero.one_like();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = a[r][fc].negated();
            }
            v
        })
        .collect();
    rref(&mut basis);
    basis
}

pub fn determinant<F: Field>(m: &Matrix<F>, zero: &F) -> F {
    let n = m.len();
    let mut a = m.clone();
    let mut det = zero.one_like();
    for c in 0..n {
        let Some(p) = pick_pivot(&a, c, c) else { return zero.clone() };
        if p != c {
            a.swap(c, p);
            det = det.negated();
        }
        det = det.times(&a[c][c]);
        eliminate_below(&mut a, c, c, c + 1, n);
    }
    det
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<F: Field>(m: &Matrix<F>, zero: &F) -> Option<Matrix<F>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut aug: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v = row.clone();
            v.extend((0..n).map(|c| if c == r { zero.one_like() } else { zero.clone() }));
            v
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `m·x = b`. Returns `Err(true)` when inconsistent and `Err(false)`
/// when consistent but not uniquely solvable.
pub fn solve_unique<F: Field>(m: &Matrix<F>, b: &[F]) -> Result<Vec<F>, bool> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix<F> = m
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut v = row.clone();
            v.push(x.clone());
            v
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return Err(true);
    }
    if pivots.len() < cols {
        return Err(false);
    }
    Ok(aug.into_iter().take(cols).map(|mut row| row.pop().expect("augmented column")).collect())
}

pub fn mat_vec<F: Field>(m: &Matrix<F>, v: &[F], zero: &F) -> Vec<F> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).fold(zero.clone(), |acc, (a, x)| {
                if a.is_zero() || x.is_zero() {
                    acc
                } else {
                    acc.plus(&a.times(x))
                }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaussQ;

    fn m(rows: &[&[i64]]) -> Matrix<GaussQ> {
        rows.iter().map(|r| r.iter().map(|&x| GaussQ::from_int(x)).collect()).collect()
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 7, 9]]);
        let k = kernel(&a, 4, &GaussQ::zero());
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v, &GaussQ::zero()).iter().all(GaussQ::is_zero));
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(determinant(&a, &GaussQ::zero()), GaussQ::from_int(18));
        let inv = inverse(&a, &GaussQ::zero()).unwrap();
        let e0 = mat_vec(&a, &inv.iter().map(|r| r[0].clone()).collect::<Vec<_>>(), &GaussQ::zero());
        assert_eq!(e0, vec![GaussQ::one(), GaussQ::zero(), GaussQ::zero()]);
        assert!(inverse(&m(&[&[1, 2], &[2, 4]]), &GaussQ::zero()).is_none());
    }

    #[test]
    fn solve_reports_inconsistency() {
        let a = m(&[&[1, 1], &[1, 1]]);
        let b = [GaussQ::one(), GaussQ::zero()];
        assert_eq!(solve_unique(&a, &b), Err(true));
        let b = [GaussQ::one(), GaussQ::one()];
        assert_eq!(solve_unique(&a, &b), Err(false));
    }
}
