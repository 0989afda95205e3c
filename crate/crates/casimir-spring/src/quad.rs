//! Adaptive Gauss-Kronrod quadrature on a finite interval.
//!
//! A 7-point Gauss rule embedded in a 15-point Kronrod rule gives the panel
//! value and an error estimate; panels whose combined error exceeds the
//! target are bisected worst-first. Only the Lifshitz engine uses this; the
//! brute-force reference in [`crate::validate`] deliberately integrates with
//! a different rule and shares none of this code.

/// 15-point Kronrod abscissae (positive half), QUADPACK `qk15` values.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// 7-point Gauss weights for the embedded rule (nodes XGK[1], XGK[3],
/// XGK[5], XGK[7]). Digits kept as published even where f64 rounds them.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 7/15 application on [a, b].
///
/// Returns (integral, error estimate); always 15 integrand evaluations.
/// Index arithmetic follows the reference QUADPACK layout, where Gauss
/// nodes sit at the odd Kronrod indices.
#[allow(clippy::needless_range_loop)]
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);

    let fc = f(centr);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];

    // Gauss points (odd Kronrod indices)
    for j in 0..3 {
        let jtw = 2 * j + 1;
        let absc = hlgth * XGK[jtw];
        let f1 = f(centr - absc);
        let f2 = f(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += WG[j] * (f1 + f2);
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    // Kronrod-only points (even indices)
    for j in 0..4 {
        let jtw = 2 * j;
        let absc = hlgth * XGK[jtw];
        let f1 = f(centr - absc);
        let f2 = f(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }

    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }

    let result = resk * hlgth;
    resabs *= hlgth.abs();
    resasc *= hlgth.abs();

    let mut abserr = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && abserr != 0.0 {
        let scale = (200.0 * abserr / resasc).powf(1.5);
        abserr = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        abserr = abserr.max(50.0 * f64::EPSILON * resabs);
    }
    (result, abserr)
}

/// Result of one adaptive integration.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct QuadResult {
    pub integral: f64,
    pub abs_err: f64,
    pub n_evals: u64,
}

/// Integrate f over [a, b] until the summed error estimate drops below
/// `max(abs_tol, rel_tol * |integral|)`.
///
/// Bisections are drawn from `*budget`, which is shared across the panels of
/// one Matsubara term. `Err` means the budget ran out; the partial result is
/// still returned so callers can attach it to a convergence error.
pub(crate) fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    budget: &mut u32,
) -> Result<QuadResult, QuadResult> {
    struct Interval {
        a: f64,
        b: f64,
        val: f64,
        err: f64,
        splittable: bool,
    }

    let make = |a: f64, b: f64| {
        let (val, err) = qk15(f, a, b);
        let splittable = (b - a) > 1e-14 * (a.abs() + b.abs() + 1.0);
        Interval {
            a,
            b,
            val,
            err,
            splittable,
        }
    };

    let mut intervals = vec![make(a, b)];
    let mut n_evals = 15u64;
    let mut prev_err: Option<f64> = None;
    let mut stagnant = 0u32;

    loop {
        let total_val: f64 = intervals.iter().map(|i| i.val).sum();
        let total_err: f64 = intervals.iter().map(|i| i.err).sum();
        let target = abs_tol.max(rel_tol * total_val.abs());
        if total_err <= target {
            return Ok(QuadResult {
                integral: total_val,
                abs_err: total_err,
                n_evals,
            });
        }
        // A roundoff plateau keeps the summed estimate from shrinking no
        // matter how finely we split; accept the achieved accuracy rather
        // than burn the budget. est_error stays honest about the shortfall.
        if let Some(prev) = prev_err {
            if total_err > 0.999 * prev {
                stagnant += 1;
                if stagnant >= 15 {
                    return Ok(QuadResult {
                        integral: total_val,
                        abs_err: total_err,
                        n_evals,
                    });
                }
            } else {
                stagnant = 0;
            }
        }
        prev_err = Some(total_err);

        let worst = intervals
            .iter()
            .enumerate()
            .filter(|(_, i)| i.splittable)
            .max_by(|(_, x), (_, y)| x.err.total_cmp(&y.err))
            .map(|(idx, _)| idx);
        let (result_if_stuck, idx) = match worst {
            Some(idx) => (None, idx),
            // nothing left to split; report what we have
            None => (
                Some(QuadResult {
                    integral: total_val,
                    abs_err: total_err,
                    n_evals,
                }),
                0,
            ),
        };
        if let Some(r) = result_if_stuck {
            return Ok(r);
        }
        if *budget == 0 {
            return Err(QuadResult {
                integral: total_val,
                abs_err: total_err,
                n_evals,
            });
        }
        *budget -= 1;

        let Interval { a, b, .. } = intervals.swap_remove(idx);
        let mid = 0.5 * (a + b);
        intervals.push(make(a, mid));
        intervals.push(make(mid, b));
        n_evals += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> QuadResult {
        let mut budget = 500;
        integrate_adaptive(&f, a, b, 0.0, tol, &mut budget).expect("budget exhausted")
    }

    #[test]
    fn polynomial_is_nearly_exact() {
        // K15 integrates degree <= 29 exactly
        let r = run(|x| x.powi(7) - 3.0 * x.powi(3) + 1.0, 0.0, 2.0, 1e-12);
        let exact = 2.0f64.powi(8) / 8.0 - 3.0 * 2.0f64.powi(4) / 4.0 + 2.0;
        assert!((r.integral - exact).abs() < 1e-12);
        assert_eq!(r.n_evals, 15);
    }

    #[test]
    fn exponential_decay() {
        let r = run(|x| x * (-x).exp(), 0.0, 30.0, 1e-12);
        // int_0^inf x e^-x = 1, truncation below 1e-11 at 30
        assert!((r.integral - 1.0).abs() < 1e-10, "{}", r.integral);
    }

    #[test]
    fn endpoint_log_kink_converges() {
        // int_0^1 x ln x dx = -1/4; integrand has unbounded derivatives at 0
        let r = run(|x| x * x.ln(), 0.0, 1.0, 1e-11);
        assert!((r.integral + 0.25).abs() < 1e-10, "{}", r.integral);
        assert!(r.abs_err < 1e-9);
    }

    #[test]
    fn budget_exhaustion_reports_partial() {
        let mut budget = 1;
        let res = integrate_adaptive(
            &|x: f64| x.ln().abs().sqrt(),
            0.0,
            1.0,
            0.0,
            1e-14,
            &mut budget,
        );
        assert!(res.is_err());
        let partial = res.unwrap_err();
        assert!(partial.integral.is_finite());
        assert_eq!(budget, 0);
    }

    #[test]
    fn error_estimate_covers_true_error() {
        let exact = 1.0 - (-8.0f64).exp() * 9.0; // int_0^8 x e^-x
        let r = run(|x| x * (-x).exp(), 0.0, 8.0, 1e-10);
        assert!((r.integral - exact).abs() <= r.abs_err.max(1e-13));
    }
}
