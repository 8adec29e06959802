//! The asymptotic object `L_q(f; z)`: the limit of
//! `[n+1]_q (U_{n,q}(f) - f)` as `n` grows. Two computation paths (series
//! coefficients and q-derivative quotient), the classical limit `L_1`, and
//! a continuity scan in `q` toward 1.

use crate::complex::{CompensatedCx, Cx};
use crate::error::{Error, Result};
use crate::qcore::{lq_coefficient_of, q_derivative, QContext};
use crate::scalar::Scalar;
use crate::series::{DiskSpec, PowerSeries, Radius};

/// Cached series coefficients of `L_q`:
/// `c_m = q sum_{i=1}^{m-1} [i]_q + sum_{i=1}^{m-1} [i]_{1/q}` for `m >= 2`,
/// with `c_m -> m(m-1)` as `q -> 1` (the same expression evaluates to
/// exactly `m(m-1)` at `q = 1`; no division by `q - 1` occurs anywhere).
#[derive(Clone, Debug)]
pub struct LqCoefficients<S: Scalar> {
    q: S,
    c: Vec<S>,
}

impl<S: Scalar> LqCoefficients<S> {
    pub fn new(ctx: &QContext<S>, m_max: usize) -> Self {
        let q = ctx.q().clone();
        let c = (0..=m_max).map(|m| lq_coefficient_of(m, &q)).collect();
        LqCoefficients { q, c }
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    /// `c_m`; zero for `m < 2`.
    pub fn coefficient(&self, m: usize) -> S {
        self.c
            .get(m)
            .cloned()
            .unwrap_or_else(|| lq_coefficient_of(m, &self.q))
    }
}

fn check_lq_radius<S: Scalar>(f: &PowerSeries<S>, scaled_mod: &S, what: &str) -> Result<()> {
    match f.radius() {
        Radius::Infinite => Ok(()),
        Radius::Finite(rr) => {
            if scaled_mod < rr {
                Ok(())
            } else {
                Err(Error::domain(format!(
                    "{what} requires q|z| < R (function `{}`)",
                    f.name()
                )))
            }
        }
    }
}

/// `L_q(f; z) = sum_{m>=2} a_m c_m z^(m-1) (1-z)`, truncated with a tail
/// majorant from `c_m <= m(m-1) q^(m-1)`. Requires `q >= 1` and `q|z| < R`
/// so the majorized tail converges.
pub fn lq_series<S: Scalar>(
    f: &PowerSeries<S>,
    ctx: &QContext<S>,
    z: &Cx<S>,
) -> Result<Cx<S>> {
    Ok(lq_series_with_uncertainty(f, ctx, z)?.0)
}

/// Series path together with its absolute truncation uncertainty.
pub fn lq_series_with_uncertainty<S: Scalar>(
    f: &PowerSeries<S>,
    ctx: &QContext<S>,
    z: &Cx<S>,
) -> Result<(Cx<S>, S)> {
    if *ctx.q() < S::one() {
        return Err(Error::domain(
            "lq_series requires q >= 1 (for 0 < q < 1 the paper sets L_q = L_1)",
        ));
    }
    let zmod = z.modulus();
    let scaled = ctx.q().clone() * zmod.clone();
    check_lq_radius(f, &scaled, "lq_series")?;
    let coeffs = LqCoefficients::new(ctx, f.truncation());
    let mut acc = CompensatedCx::new();
    let one_minus_z = Cx::one() - z.clone();
    for (m, a) in f.coeffs().iter().enumerate().skip(2) {
        if a.is_zero() {
            continue;
        }
        let w = a.clone() * z.powu(m as u32 - 1) * one_minus_z.clone();
        acc.add(w.scale(&coeffs.coefficient(m)));
    }
    // tail: sum_{m>N} |a_m| c_m |z|^(m-1) |1-z|
    //     <= |1-z| (q|z|) sum_{m>N} |a_m| m(m-1) (q|z|)^(m-2)
    let n = f.truncation();
    let tail = if matches!(f.tail_kind(), crate::series::TailKind::Polynomial) {
        S::zero()
    } else {
        let base = crate::series::weighted_convergence_tail(f, n + 1, &scaled)?;
        one_minus_z.modulus() * scaled * base
    };
    Ok((acc.total(), tail))
}

/// Direct definition for `q > 1`:
/// `L_q(f; z) = (1-z) q (D_q f(z) - D_{1/q} f(z)) / (q - 1)`.
/// Needs `f` at `qz`, hence `q|z| < R`; rejects `q = 1`.
pub fn lq_direct<S: Scalar>(
    f: &PowerSeries<S>,
    ctx: &QContext<S>,
    z: &Cx<S>,
) -> Result<Cx<S>> {
    let q = ctx.q();
    if ctx.is_q_one() {
        return Err(Error::domain("lq_direct requires q != 1 (use l1_eval)"));
    }
    if *q < S::one() {
        return Err(Error::domain(
            "lq_direct requires q > 1 (for 0 < q < 1 the paper sets L_q = L_1)",
        ));
    }
    let zmod = z.modulus();
    let scaled = q.clone() * zmod;
    check_lq_radius(f, &scaled, "lq_direct")?;
    let dq = q_derivative(f, z, ctx)?;
    let dq_inv = q_derivative(f, z, &ctx.reciprocal())?;
    let one_minus_z = Cx::one() - z.clone();
    let factor = q.clone() / (q.clone() - S::one());
    Ok((one_minus_z * (dq - dq_inv)).scale(&factor))
}

/// Classical limit `L_1(f; z) = f''(z) z (1 - z)`.
pub fn l1_eval<S: Scalar>(f: &PowerSeries<S>, z: &Cx<S>) -> Result<Cx<S>> {
    let dd = f.second_derivative_eval(z)?;
    let w = z.clone() * (Cx::one() - z.clone());
    Ok(dd * w)
}

/// One row of the continuity scan.
#[derive(Clone, Debug)]
pub struct ContinuityRow<S: Scalar> {
    pub q: S,
    /// `sup_circle |L_q(f) - L_1(f)|`, absent when the hypothesis failed.
    pub sup_distance: Option<S>,
    /// Reason this entry was skipped, if any.
    pub flag: Option<String>,
}

/// Scan `sup_{|z|=r} |L_q(f; z) - L_1(f; z)|` for each `q` in the list;
/// hypothesis violations (`q` outside `(1, R/r)`) flag the entry instead of
/// failing the scan. For the builtin functions the sequence decreases to 0
/// as `q` decreases to 1.
pub fn lq_continuity_scan<S: Scalar>(
    f: &PowerSeries<S>,
    disk: &DiskSpec<S>,
    q_list: &[S],
) -> Result<Vec<ContinuityRow<S>>> {
    let mut rows = Vec::with_capacity(q_list.len());
    for q in q_list {
        if *q <= S::one() {
            rows.push(ContinuityRow {
                q: q.clone(),
                sup_distance: None,
                flag: Some("requires q > 1".to_string()),
            });
            continue;
        }
        let scaled = q.clone() * disk.r().clone();
        if let Radius::Finite(rr) = f.radius() {
            if &scaled >= rr {
                rows.push(ContinuityRow {
                    q: q.clone(),
                    sup_distance: None,
                    flag: Some("requires q < R/r (Theorem 5 hypothesis)".to_string()),
                });
                continue;
            }
        }
        let ctx = QContext::new(q.clone())?;
        let mut best_sq = S::zero();
        for z in disk.circle_points() {
            let d = lq_series(f, &ctx, &z)? - l1_eval(f, &z)?;
            let msq = d.modulus_sq();
            if msq > best_sq {
                best_sq = msq;
            }
        }
        rows.push(ContinuityRow {
            q: q.clone(),
            sup_distance: Some(best_sq.sqrt()),
            flag: None,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use crate::series::{builtin_series, BuiltinSeries};

    fn rctx(num: i64, den: i64) -> QContext<Rat> {
        QContext::new(Rat::from_ratio(num, den)).unwrap()
    }

    fn r(num: i64, den: i64) -> Rat {
        Rat::from_ratio(num, den)
    }

    #[test]
    fn coefficients_basics() {
        let ctx = rctx(3, 2);
        let c = LqCoefficients::new(&ctx, 8);
        assert!(c.coefficient(0).is_zero());
        assert!(c.coefficient(1).is_zero());
        // c_2 = q + 1
        assert_eq!(c.coefficient(2), r(5, 2));
        // positivity
        for m in 2..=8 {
            assert!(c.coefficient(m) > Rat::from_int(0));
        }
        // classical limit at q = 1 is exactly m(m-1)
        let c1 = LqCoefficients::new(&rctx(1, 1), 8);
        for m in 2..=8usize {
            assert_eq!(c1.coefficient(m), Rat::from_int((m * (m - 1)) as i64));
        }
        // c_3 at q: q(1 + [2]_q) + (1 + [2]_{1/q}); at q=1 this is 6
        let c3 = LqCoefficients::new(&rctx(1, 1), 3).coefficient(3);
        assert_eq!(c3, Rat::from_int(6));
    }

    #[test]
    fn lq_on_e2_is_closed_form() {
        // L_q(e_2; z) = (1+q) z (1-z), both paths, exact
        for ctx in [rctx(3, 2), rctx(2, 1)] {
            let e2 = builtin_series::<Rat>(BuiltinSeries::Monomial(2), 4).unwrap();
            let q = ctx.q().clone();
            for z in [Cx::real(r(1, 3)), Cx::new(r(-1, 2), r(2, 7)), Cx::zero()] {
                let expect = (z.clone() * (Cx::one() - z.clone()))
                    .scale(&(q.clone() + Rat::from_int(1)));
                assert_eq!(lq_series(&e2, &ctx, &z).unwrap(), expect);
                assert_eq!(lq_direct(&e2, &ctx, &z).unwrap(), expect);
            }
        }
    }

    #[test]
    fn lq_annihilates_linear() {
        let ctx = rctx(3, 2);
        let lin = builtin_series(
            BuiltinSeries::Poly(vec![Cx::real(r(3, 1)), Cx::real(r(-2, 1))]),
            4,
        )
        .unwrap();
        let z = Cx::new(r(1, 3), r(1, 8));
        assert!(lq_series(&lin, &ctx, &z).unwrap().is_zero());
        assert!(lq_direct(&lin, &ctx, &z).unwrap().is_zero());
        assert!(l1_eval(&lin, &z).unwrap().is_zero());
    }

    #[test]
    fn dual_path_equality_polynomials() {
        // exact equality for polynomial f of degree <= 8, rational q > 1
        let coeffs: Vec<Cx<Rat>> = (0..=8)
            .map(|j| Cx::new(r(j as i64 + 1, 3), r(-(j as i64), 7)))
            .collect();
        let f = builtin_series(BuiltinSeries::Poly(coeffs), 8).unwrap();
        for ctx in [rctx(3, 2), rctx(2, 1), rctx(5, 4)] {
            for z in [Cx::real(r(2, 5)), Cx::new(r(-3, 4), r(1, 2))] {
                let a = lq_series(&f, &ctx, &z).unwrap();
                let b = lq_direct(&f, &ctx, &z).unwrap();
                assert_eq!(a, b, "q={}", ctx.q());
            }
        }
    }

    #[test]
    fn dual_path_close_in_float() {
        let f = builtin_series::<f64>(BuiltinSeries::Exp, 40).unwrap();
        let ctx = QContext::new(1.2f64).unwrap();
        for j in 0..16usize {
            let (c, s) = <f64 as crate::scalar::Scalar>::circle_point(j, 16, &1.0);
            let z = Cx::new(0.9 * c, 0.9 * s);
            let a = lq_series(&f, &ctx, &z).unwrap();
            let b = lq_direct(&f, &ctx, &z).unwrap();
            let diff = (a.clone() - b).modulus();
            let scale = a.modulus().max(1e-12);
            assert!(diff / scale < 1e-10, "j={j} rel={}", diff / scale);
        }
    }

    #[test]
    fn l1_values() {
        let e3 = builtin_series::<Rat>(BuiltinSeries::Monomial(3), 4).unwrap();
        // L_1(e_3; 1/2) = 6 z^2 (1-z) = 6 * 1/4 * 1/2 = 3/4
        let v = l1_eval(&e3, &Cx::real(r(1, 2))).unwrap();
        assert_eq!(v.re, r(3, 4));
        let e2 = builtin_series::<Rat>(BuiltinSeries::Monomial(2), 4).unwrap();
        let z = Cx::real(r(1, 3));
        assert_eq!(
            l1_eval(&e2, &z).unwrap(),
            (z.clone() * (Cx::one() - z.clone())).scale(&Rat::from_int(2))
        );
    }

    #[test]
    fn voronovskaja_exactness_at_m2() {
        // U(e_2) - e_2 = L_q(e_2)/[n+1]_q identically
        for ctx in [rctx(3, 2), rctx(2, 1)] {
            for n in 1..=8usize {
                let t = crate::operator::u_monomial_recurrence(n, 2, &ctx).unwrap();
                let lhs = t
                    .row(2)
                    .unwrap()
                    .sub(&crate::poly::ComplexPoly::monomial(2));
                // L_q(e_2) = (1+q) z(1-z)
                let c = (Rat::from_int(1) + ctx.q().clone())
                    / crate::qcore::q_integer(n + 1, &ctx);
                let rhs = crate::poly::ComplexPoly::monomial(1)
                    .sub(&crate::poly::ComplexPoly::monomial(2))
                    .scale(&c);
                assert_eq!(lhs, rhs, "n={n}");
            }
        }
    }

    #[test]
    fn continuity_scan_e2_anchor() {
        let f = builtin_series::<f64>(BuiltinSeries::Exp, 48).unwrap();
        let disk = DiskSpec::<f64>::unit(64).unwrap();
        let qs: Vec<f64> = (3..=6).map(|k| 1.0 + 10f64.powi(-k)).collect();
        let rows = lq_continuity_scan(&f, &disk, &qs).unwrap();
        let vals: Vec<f64> = rows.iter().map(|r| r.sup_distance.unwrap()).collect();
        for w in vals.windows(2) {
            assert!(w[0] > w[1], "strictly decreasing");
            let ratio = w[0] / w[1];
            assert!((5.0..=20.0).contains(&ratio), "ratio {ratio}");
        }
        // e_2 anchor: sup = 2(q-1) exactly up to float format
        let e2 = builtin_series::<f64>(BuiltinSeries::Monomial(2), 4).unwrap();
        let rows = lq_continuity_scan(&e2, &disk, &qs).unwrap();
        for (row, q) in rows.iter().zip(&qs) {
            let expect = 2.0 * (q - 1.0);
            assert!((row.sup_distance.unwrap() - expect).abs() < 1e-10);
        }
        // hypothesis flagging: geometric pole 2 with q = 3 on r = 1
        let g = builtin_series::<f64>(BuiltinSeries::Geometric(2.0), 16).unwrap();
        let rows = lq_continuity_scan(&g, &disk, &[3.0, 1.5]).unwrap();
        assert!(rows[0].flag.is_some());
        assert!(rows[0].sup_distance.is_none());
        assert!(rows[1].flag.is_none());
    }
}
