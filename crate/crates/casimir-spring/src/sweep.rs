//! Gap sweeps: evaluate the spring constant over a grid of gaps for several
//! coatings in parallel and serialise the result as CSV.
//!
//! Determinism contract: for a fixed [`SweepSpec`] the emitted CSV is
//! byte-identical whatever the worker count. Rows are collected in grid
//! order and each cell is computed by a single thread, so no
//! floating-point reduction depends on scheduling.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::config::{Spacing, SweepFormula, SweepSpec};
use crate::error::{Error, Result};
use crate::lifshitz::{HalfSpacePair, LifshitzEvaluator};
use crate::pfa::{
    membrane_spring_constant, spring_constant_cap_only, spring_constant_full,
    spring_constant_perfect_conductor,
};

/// One cell of a sweep: a spring constant with its propagated error, or a
/// record of why the engine could not produce one.
#[derive(Debug, Clone)]
pub enum SweepCell {
    Value {
        k_c: f64,
        est_error: f64,
        n_evals: u64,
    },
    Failed {
        reason: String,
    },
}

impl SweepCell {
    pub fn value(&self) -> Option<f64> {
        match self {
            SweepCell::Value { k_c, .. } => Some(*k_c),
            SweepCell::Failed { .. } => None,
        }
    }

    pub fn est_error(&self) -> Option<f64> {
        match self {
            SweepCell::Value { est_error, .. } => Some(*est_error),
            SweepCell::Failed { .. } => None,
        }
    }
}

/// One gap point: a cell per coating, in [`SweepSpec`] coating order.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Gap, m.
    pub x: f64,
    pub cells: Vec<SweepCell>,
    /// Ideal-mirror closed form, present when the configuration asks for
    /// it.
    pub k_c_pc: Option<f64>,
    /// k_C / k_S per coating; `None` where the membrane spring constant is
    /// unknown or the cell failed.
    pub ratios: Vec<Option<f64>>,
}

/// A finished sweep plus its run diagnostics.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    /// Number of cells that failed to converge.
    pub n_failed: usize,
    pub wall_time: Duration,
    /// Reflection-coefficient evaluations summed over all cells.
    pub total_evals: u64,
}

/// The gap grid for a spec: `n_points` values from `gap_min` to `gap_max`
/// inclusive, strictly increasing, with both endpoints exact.
pub fn gap_grid(spec: &SweepSpec) -> Vec<f64> {
    let n = spec.n_points as usize;
    let mut grid = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let x = match spec.spacing {
            Spacing::Linear => spec.gap_min + (spec.gap_max - spec.gap_min) * t,
            Spacing::Log => (spec.gap_min.ln() + (spec.gap_max.ln() - spec.gap_min.ln()) * t).exp(),
        };
        grid.push(x);
    }
    grid[0] = spec.gap_min;
    grid[n - 1] = spec.gap_max;
    debug_assert!(grid.windows(2).all(|w| w[0] < w[1]));
    grid
}

/// Run the sweep described by `spec`.
///
/// Setup problems (invalid spec, bad engine config) are returned as `Err`.
/// A convergence failure at an individual grid point is not: the cell is
/// marked [`SweepCell::Failed`], counted in `n_failed`, and the sweep
/// continues, so one hard point cannot discard hours of neighbours.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome> {
    spec.validate()?;
    let start = Instant::now();

    let evaluators: Vec<LifshitzEvaluator> = spec
        .coatings
        .iter()
        .map(|coating| {
            LifshitzEvaluator::new(
                HalfSpacePair::new(spec.post_material.clone(), coating.clone()),
                spec.temperature,
                spec.engine.clone(),
            )
        })
        .collect::<Result<_>>()?;
    let membrane_ks: Vec<Option<f64>> = spec
        .coatings
        .iter()
        .map(|c| membrane_spring_constant(&c.name))
        .collect();

    let grid = gap_grid(spec);
    let compute = |&x: &f64| -> SweepRow {
        let cells: Vec<SweepCell> = evaluators
            .iter()
            .map(|ev| {
                let res = match spec.formula {
                    SweepFormula::CapOnly => spring_constant_cap_only(&spec.geometry, ev, x),
                    SweepFormula::Full => spring_constant_full(&spec.geometry, ev, x),
                };
                match res {
                    Ok(r) => SweepCell::Value {
                        k_c: r.k_c,
                        est_error: r.est_error,
                        n_evals: r.n_evals,
                    },
                    Err(e) => {
                        log::warn!("x = {:e} m, {}: {e}", x, ev.pair().side_2.name);
                        SweepCell::Failed {
                            reason: e.to_string(),
                        }
                    }
                }
            })
            .collect();
        let k_c_pc = spec
            .include_pc_curve
            .then(|| spring_constant_perfect_conductor(&spec.geometry, x).k_c);
        let ratios = cells
            .iter()
            .zip(&membrane_ks)
            .map(|(cell, k_s)| Some(cell.value()? / (*k_s)?))
            .collect();
        SweepRow {
            x,
            cells,
            k_c_pc,
            ratios,
        }
    };

    // Row order comes from the indexed parallel iterator, not completion
    // order, which is what makes the output independent of scheduling.
    let rows: Vec<SweepRow> = if spec.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.workers as usize)
            .build()
            .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
        pool.install(|| grid.par_iter().map(compute).collect())
    } else {
        grid.par_iter().map(compute).collect()
    };

    let mut n_failed = 0;
    let mut total_evals = 0u64;
    for cell in rows.iter().flat_map(|r| &r.cells) {
        match cell {
            SweepCell::Value { n_evals, .. } => total_evals += n_evals,
            SweepCell::Failed { .. } => n_failed += 1,
        }
    }
    let outcome = SweepOutcome {
        rows,
        n_failed,
        wall_time: start.elapsed(),
        total_evals,
    };
    log::info!(
        "sweep: {} points x {} coatings in {:.3} s, {} integrand evals, {} failed cells",
        grid.len(),
        spec.coatings.len(),
        outcome.wall_time.as_secs_f64(),
        outcome.total_evals,
        outcome.n_failed
    );
    Ok(outcome)
}

/// Human-readable one-line summary for diagnostic streams.
pub fn timing_summary(spec: &SweepSpec, outcome: &SweepOutcome) -> String {
    let n_cells = outcome.rows.len() * spec.coatings.len();
    let per_cell = if n_cells > 0 {
        outcome.wall_time.as_secs_f64() / n_cells as f64
    } else {
        0.0
    };
    format!(
        "{} points x {} coatings in {:.3} s ({:.1} ms/cell), {} integrand evals, {} failed cells",
        outcome.rows.len(),
        spec.coatings.len(),
        outcome.wall_time.as_secs_f64(),
        per_cell * 1e3,
        outcome.total_evals,
        outcome.n_failed
    )
}

fn push_float(out: &mut String, v: f64) {
    use std::fmt::Write;
    // `{:e}` prints the shortest decimal that parses back to the same bits,
    // which is what makes the CSV round-trip exactly.
    write!(out, "{:e}", v).expect("string write");
}

/// Serialise sweep rows as CSV.
///
/// Header: `x_um,kC_<c>_N_per_m,err_<c>` per coating, then
/// `kC_pc_N_per_m` when the ideal curve is included, then `ratio_<c>_kS`
/// for each coating whose membrane spring constant is known. Failed cells
/// are `NaN`. Every line ends in a single `\n`.
pub fn emit_csv(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let membrane_ks: Vec<Option<f64>> = spec
        .coatings
        .iter()
        .map(|c| membrane_spring_constant(&c.name))
        .collect();

    let mut out = String::new();
    out.push_str("x_um");
    for c in &spec.coatings {
        out.push_str(&format!(",kC_{}_N_per_m,err_{}", c.name, c.name));
    }
    if spec.include_pc_curve {
        out.push_str(",kC_pc_N_per_m");
    }
    for (c, k_s) in spec.coatings.iter().zip(&membrane_ks) {
        if k_s.is_some() {
            out.push_str(&format!(",ratio_{}_kS", c.name));
        }
    }
    out.push('\n');

    for row in rows {
        push_float(&mut out, row.x * 1e6);
        for cell in &row.cells {
            out.push(',');
            push_float(&mut out, cell.value().unwrap_or(f64::NAN));
            out.push(',');
            push_float(&mut out, cell.est_error().unwrap_or(f64::NAN));
        }
        if spec.include_pc_curve {
            out.push(',');
            push_float(&mut out, row.k_c_pc.unwrap_or(f64::NAN));
        }
        for (ratio, k_s) in row.ratios.iter().zip(&membrane_ks) {
            if k_s.is_some() {
                out.push(',');
                push_float(&mut out, ratio.unwrap_or(f64::NAN));
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn small_spec(extra: &str) -> SweepSpec {
        parse_config(&format!("n_points = 6\n{extra}")).unwrap()
    }

    #[test]
    fn grid_hits_endpoints_exactly_and_increases() {
        for spacing in ["linear", "log"] {
            let spec = small_spec(&format!("spacing = {spacing}\nn_points = 7"));
            let grid = gap_grid(&spec);
            assert_eq!(grid.len(), 7);
            assert_eq!(grid[0], 0.59e-6);
            assert_eq!(grid[6], 3.3e-6);
            assert!(grid.windows(2).all(|w| w[0] < w[1]), "{spacing}");
        }
    }

    #[test]
    fn log_grid_has_constant_ratio() {
        let spec = small_spec("spacing = log\nn_points = 5\ngap_min_um = 1\ngap_max_um = 16");
        let grid = gap_grid(&spec);
        for w in grid.windows(2) {
            assert!((w[1] / w[0] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_point_grid_is_just_the_endpoints() {
        let spec = small_spec("n_points = 2");
        assert_eq!(gap_grid(&spec), vec![0.59e-6, 3.3e-6]);
    }

    #[test]
    fn pc_column_matches_closed_form() {
        let spec = small_spec("");
        let out = run_sweep(&spec).unwrap();
        for row in &out.rows {
            let expect = spring_constant_perfect_conductor(&spec.geometry, row.x).k_c;
            assert_eq!(row.k_c_pc, Some(expect));
        }
    }

    #[test]
    fn curves_are_positive_decreasing_and_below_pc() {
        let spec = small_spec("");
        let out = run_sweep(&spec).unwrap();
        assert_eq!(out.n_failed, 0);
        for ci in 0..spec.coatings.len() {
            let ks: Vec<f64> = out
                .rows
                .iter()
                .map(|r| r.cells[ci].value().unwrap())
                .collect();
            assert!(ks.iter().all(|&k| k > 0.0));
            assert!(ks.windows(2).all(|w| w[1] < w[0]), "{ks:?}");
            for (row, &k) in out.rows.iter().zip(&ks) {
                assert!(k < row.k_c_pc.unwrap());
            }
        }
    }

    #[test]
    fn ratio_to_membrane_stays_tiny_over_default_range() {
        let spec = small_spec("");
        let out = run_sweep(&spec).unwrap();
        for row in &out.rows {
            for ratio in row.ratios.iter().flatten() {
                assert!(*ratio > 0.0 && *ratio < 1e-3, "ratio {ratio}");
            }
        }
    }

    #[test]
    fn doubling_cap_radius_quadruples_cap_only_k() {
        let base = small_spec("n_points = 3\ncoatings = Au");
        let wide = small_spec("n_points = 3\ncoatings = Au\nr0_um = 400\nr1_um = 600");
        let a = run_sweep(&base).unwrap();
        let b = run_sweep(&wide).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            let ka = ra.cells[0].value().unwrap();
            let kb = rb.cells[0].value().unwrap();
            assert_eq!(kb, 4.0 * ka);
        }
    }

    #[test]
    fn worker_count_does_not_change_the_bytes() {
        let text = "n_points = 8\ncoatings = Au, Nb";
        let mut one = parse_config(text).unwrap();
        one.workers = 1;
        let mut eight = parse_config(text).unwrap();
        eight.workers = 8;
        let csv_one = emit_csv(&one, &run_sweep(&one).unwrap().rows);
        let csv_eight = emit_csv(&eight, &run_sweep(&eight).unwrap().rows);
        assert_eq!(csv_one, csv_eight);
    }

    #[test]
    fn csv_shape_and_round_trip() {
        let spec = small_spec("n_points = 4");
        let out = run_sweep(&spec).unwrap();
        let csv = emit_csv(&spec, &out.rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "x_um,kC_Au_N_per_m,err_Au,kC_Nb_N_per_m,err_Nb,kC_pc_N_per_m,ratio_Au_kS,ratio_Nb_kS"
        );
        assert!(csv.ends_with('\n') && !csv.ends_with("\n\n"));
        assert_eq!(csv.lines().count(), 5);
        for line in lines {
            for field in line.split(',') {
                let v: f64 = field.parse().unwrap();
                assert_eq!(format!("{:e}", v), field);
            }
        }
    }

    #[test]
    fn csv_omits_optional_columns() {
        let text = "
n_points = 2
include_pc_curve = false
material.custom.omega_eV = 6
material.custom.gamma_eV = 0.05
coatings = custom
";
        let spec = parse_config(text).unwrap();
        let out = run_sweep(&spec).unwrap();
        let csv = emit_csv(&spec, &out.rows);
        assert_eq!(
            csv.lines().next().unwrap(),
            "x_um,kC_custom_N_per_m,err_custom"
        );
        for row in &out.rows {
            assert_eq!(row.k_c_pc, None);
            assert_eq!(row.ratios, vec![None]);
        }
    }

    #[test]
    fn per_point_failure_is_recorded_not_fatal() {
        let spec = small_spec("n_points = 3\ncoatings = Au\nl_max_cap = 2");
        let out = run_sweep(&spec).unwrap();
        assert_eq!(out.n_failed, 3);
        for row in &out.rows {
            assert!(matches!(&row.cells[0], SweepCell::Failed { reason } if !reason.is_empty()));
        }
        let csv = emit_csv(&spec, &out.rows);
        assert!(csv.contains("NaN"));
    }
}
