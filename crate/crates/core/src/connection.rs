//! Connection matrices in the adapted trivialization, curvature, and the
//! concentration check.

use serde::Serialize;

use crate::algebra::{Matrix, Rational, RationalFunction, Scalar, Var};
use crate::error::{Error, Result};
use crate::prolong::{CramerSystem, IndexMaps, SectionTable, TensorTable};

/// `∇σ_a = Σ_b (Ax[b][a] dx + Ay[b][a] dy) σ_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionPair<S> {
    pub ax: Matrix<S>,
    pub ay: Matrix<S>,
}

/// Covariant derivatives of the sections read off at the free slots.
///
/// Free components of every section are constants, so only the
/// correction terms survive there.
pub fn covariant_derivatives<S: Scalar>(
    sections: &SectionTable<S>,
    e: &TensorTable<S>,
    cramer: &CramerSystem<S>,
    maps: &IndexMaps,
) -> Result<ConnectionPair<S>> {
    let d = maps.d;
    let m = maps.free_count();
    let mut ax = Matrix::zeros(m, m);
    let mut ay = Matrix::zeros(m, m);
    let u = &cramer.u;
    for a in 1..=m {
        let www = sections.www(a);
        let ww: Vec<Matrix<S>> = (0..=d - 3).map(|h| sections.ww(a, h)).collect();
        for b in 1..=m {
            let (h, j) = maps.free_slot(b);
            let (nx, ny) = if h + 4 <= d {
                let mut sx = S::zero();
                for (k, wk) in ww.iter().enumerate().take(h + 2) {
                    let v = e.get(k, 1, h).mul(wk)?;
                    sx = sx.add(v.get(j, 0));
                }
                (sx.neg(), sections.get(a, h + 1, j).neg())
            } else {
                let row_x = (d - 3) * (d - 2) + j;
                let row_y = (d - 2) * (d - 2) + j;
                let dot = |row: usize| {
                    (0..www.rows()).fold(S::zero(), |acc, i| {
                        let c = u.get(row, i);
                        let w = www.get(i, 0);
                        if c.is_zero() || w.is_zero() {
                            acc
                        } else {
                            acc.add(&c.mul(w))
                        }
                    })
                };
                (dot(row_x).neg(), dot(row_y).neg())
            };
            ax.set(b - 1, a - 1, nx);
            ay.set(b - 1, a - 1, ny);
        }
    }
    Ok(ConnectionPair { ax, ay })
}

/// `KK = ∂x Ay - ∂y Ax + Ax Ay - Ay Ax`.
pub fn curvature<S: Scalar>(conn: &ConnectionPair<S>) -> Result<Matrix<S>> {
    let dx_ay = conn.ay.derivative(Var::X)?;
    let dy_ax = conn.ax.derivative(Var::Y)?;
    let comm = conn.ax.mul(&conn.ay)?.sub(&conn.ay.mul(&conn.ax)?)?;
    dx_ay.sub(&dy_ax)?.add(&comm)
}

/// Closed form for `d = 3` from the seed column `(M1, M2)`:
/// `(M1)_y - (M2)_x`, the orientation of [`curvature`] with `Ax = -M1`,
/// `Ay = -M2`.
pub fn blaschke_d3<S: Scalar>(m: &Matrix<S>) -> Result<S> {
    if m.shape() != (2, 1) {
        return Err(Error::WrongDegree(m.rows() + 1));
    }
    let m1y = m.get(0, 0).derivative(Var::Y)?;
    let m2x = m.get(1, 0).derivative(Var::X)?;
    Ok(m1y.sub(&m2x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcentrationReport {
    pub ok: bool,
    /// 1-based `(row, col)` of nonzero entries above the last row.
    pub violations: Vec<(usize, usize)>,
}

/// All rows but the last must vanish.
pub fn check_concentration<S: Scalar>(kk: &Matrix<S>) -> ConcentrationReport {
    let mut violations = Vec::new();
    for i in 0..kk.rows().saturating_sub(1) {
        for j in 0..kk.cols() {
            if !kk.get(i, j).is_zero() {
                violations.push((i + 1, j + 1));
            }
        }
    }
    ConcentrationReport { ok: violations.is_empty(), violations }
}

/// Entrywise exact value at a point.
pub fn evaluate_at(mat: &Matrix<RationalFunction>, x: &Rational, y: &Rational) -> Result<Matrix<Rational>> {
    mat.try_map(|row, col, f| f.eval(x, y).ok_or(Error::PoleAtPoint { row: row + 1, col: col + 1 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    #[test]
    fn zero_connection_has_zero_curvature() {
        let c = ConnectionPair::<RationalFunction> {
            ax: Matrix::zeros(3, 3),
            ay: Matrix::zeros(3, 3),
        };
        assert!(curvature(&c).unwrap().is_zero());
    }

    #[test]
    fn concentration_reports_locations() {
        assert!(check_concentration(&Matrix::<RationalFunction>::zeros(3, 3)).ok);
        let mut k = Matrix::<RationalFunction>::zeros(3, 3);
        k.set(0, 0, RationalFunction::x());
        k.set(2, 1, RationalFunction::y());
        let r = check_concentration(&k);
        assert!(!r.ok);
        assert_eq!(r.violations, vec![(1, 1)]);
    }

    #[test]
    fn evaluation_and_poles() {
        let m = Matrix::from_rows(vec![vec!["x*y".parse::<RationalFunction>().unwrap()]]).unwrap();
        assert_eq!(
            evaluate_at(&m, &rational(2, 1), &rational(3, 1)).unwrap().get(0, 0),
            &rational(6, 1)
        );
        let m = Matrix::from_rows(vec![vec!["1/(x-1)".parse::<RationalFunction>().unwrap()]]).unwrap();
        assert_eq!(
            evaluate_at(&m, &rational(1, 1), &rational(0, 1)),
            Err(Error::PoleAtPoint { row: 1, col: 1 })
        );
    }

    #[test]
    fn blaschke_needs_a_column_of_two() {
        assert_eq!(blaschke_d3(&Matrix::<RationalFunction>::zeros(3, 2)), Err(Error::WrongDegree(4)));
    }
}
