//! Experiment drivers: trajectory runs, decoherence-time estimation, and
//! parameter sweeps.
//!
//! Everything here is deterministic by construction: fixed iteration orders,
//! no timestamps, and sweep grid points are dispatched in parallel but
//! collected back in lexicographic grid order. Two identical invocations
//! write byte-identical files.

use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use rayon::prelude::*;
use serde::Deserialize;

use cyclewalk::{
    default_coin, mutual_information, reconstruct_density, spectrum, stationary_density,
    trace_distance, BlockEvolution, DensityMatrix, DirectEvolution, EntropyRecord, WalkParams,
};

/// Which evolution engine a run uses. `Both` runs the two in lockstep and
/// reports the direct backend's values plus a per-row cross-backend
/// trace-norm discrepancy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Direct,
    Fourier,
    Both,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Direct => "direct",
            Backend::Fourier => "fourier",
            Backend::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// One fully specified run.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub params: WalkParams,
    pub t_max: usize,
    pub record_every: usize,
    pub backend: Backend,
    /// Convergence threshold; only decoherence-time runs read it.
    pub epsilon: f64,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl ExperimentSpec {
    pub fn new(params: WalkParams, t_max: usize) -> Self {
        Self {
            params,
            t_max,
            record_every: 1,
            backend: Backend::Fourier,
            epsilon: 1e-3,
            output_path: None,
            output_format: OutputFormat::Csv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.record_every >= 1, "record interval must be at least 1");
        Ok(())
    }

    fn is_recorded(&self, t: usize) -> bool {
        t % self.record_every == 0 || t == self.t_max
    }
}

/// One recorded trajectory step.
#[derive(Debug, Clone)]
pub struct TrajectoryRow {
    pub time: usize,
    /// Position distribution P(x), length N.
    pub position: Vec<f64>,
    pub entropy: EntropyRecord,
    /// Trace distance to the (parity-matched, on even cycles) stationary
    /// state. For p = 0 this is the distance to the same formal limit
    /// operator; it then simply does not decay.
    pub trace_distance: f64,
    /// Cross-backend trace-norm discrepancy; present only for `Both`.
    pub backend_discrepancy: Option<f64>,
}

fn row_from_state(
    rho: &DensityMatrix,
    t: usize,
    backend_discrepancy: Option<f64>,
) -> Result<TrajectoryRow> {
    let target = stationary_density(rho.n_sites(), t % 2)?;
    Ok(TrajectoryRow {
        time: t,
        position: rho.position_distribution(),
        entropy: mutual_information(rho, t)?,
        trace_distance: trace_distance(rho.matrix(), target.matrix()),
        backend_discrepancy,
    })
}

/// Runs the walk for `spec.t_max` steps and returns one row per recorded
/// time (multiples of `record_every`, plus `t_max` itself).
pub fn run_trajectory(spec: &ExperimentSpec) -> Result<Vec<TrajectoryRow>> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.t_max / spec.record_every + 2);
    match spec.backend {
        Backend::Direct => {
            let mut ev = DirectEvolution::new(&spec.params)?;
            for t in 0..=spec.t_max {
                if t > 0 {
                    ev.advance();
                }
                if spec.is_recorded(t) {
                    rows.push(row_from_state(ev.state(), t, None)?);
                }
            }
        }
        Backend::Fourier => {
            let mut ev = BlockEvolution::new(&spec.params)?;
            for t in 0..=spec.t_max {
                if t > 0 {
                    ev.advance();
                }
                if spec.is_recorded(t) {
                    rows.push(row_from_state(&reconstruct_density(&ev.field()), t, None)?);
                }
            }
        }
        Backend::Both => {
            let mut direct = DirectEvolution::new(&spec.params)?;
            let mut fourier = BlockEvolution::new(&spec.params)?;
            for t in 0..=spec.t_max {
                if t > 0 {
                    direct.advance();
                    fourier.advance();
                }
                if spec.is_recorded(t) {
                    let via_fourier = reconstruct_density(&fourier.field());
                    let gap =
                        trace_distance(direct.state().matrix(), via_fourier.matrix());
                    rows.push(row_from_state(direct.state(), t, Some(gap))?);
                }
            }
        }
    }
    Ok(rows)
}

/// Entropies at every step 0..=t_max (Fourier backend).
pub fn entropy_curve(params: &WalkParams, t_max: usize) -> Result<Vec<EntropyRecord>> {
    let mut ev = BlockEvolution::new(params)?;
    let mut records = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            ev.advance();
        }
        let rho = reconstruct_density(&ev.field());
        records.push(mutual_information(&rho, t)?);
    }
    Ok(records)
}

/// Trace distance to the parity-matched stationary state at every recorded
/// time, plus the final state. Shared by the decoherence-time estimator and
/// the sweep engine.
fn distance_curve(spec: &ExperimentSpec) -> Result<(Vec<(usize, f64)>, DensityMatrix)> {
    spec.validate()?;
    let n = spec.params.n_sites();
    let mut curve = Vec::new();
    let mut record = |rho: &DensityMatrix, t: usize| -> Result<()> {
        let target = stationary_density(n, t % 2)?;
        curve.push((t, trace_distance(rho.matrix(), target.matrix())));
        Ok(())
    };
    match spec.backend {
        Backend::Direct => {
            let mut ev = DirectEvolution::new(&spec.params)?;
            for t in 0..=spec.t_max {
                if t > 0 {
                    ev.advance();
                }
                if spec.is_recorded(t) {
                    record(ev.state(), t)?;
                }
            }
            Ok((curve, ev.into_state()))
        }
        Backend::Fourier | Backend::Both => {
            let mut ev = BlockEvolution::new(&spec.params)?;
            for t in 0..=spec.t_max {
                if t > 0 {
                    ev.advance();
                }
                if spec.is_recorded(t) {
                    record(&reconstruct_density(&ev.field()), t)?;
                }
            }
            let final_state = reconstruct_density(&ev.field());
            Ok((curve, final_state))
        }
    }
}

/// Result of a decoherence-time run: the convergence threshold, the first
/// time after which every recorded distance stays below it (`None` when the
/// run was too short to certify one), and the full recorded curve.
#[derive(Debug, Clone)]
pub struct DecoherenceTimeResult {
    pub epsilon: f64,
    pub d_epsilon: Option<usize>,
    pub distance_curve: Vec<(usize, f64)>,
}

/// Certifies a threshold crossing from a recorded distance curve: the
/// largest recorded time whose distance still reaches `epsilon` (0 when the
/// bound holds from the start), or `None` when the last recorded point
/// itself violates the bound and nothing beyond it can be certified.
fn certify_threshold(curve: &[(usize, f64)], epsilon: f64) -> Option<usize> {
    let last_violation = curve
        .iter()
        .rev()
        .find(|(_, d)| *d >= epsilon)
        .map(|(t, _)| *t);
    match last_violation {
        None => Some(0),
        Some(t) if Some(t) == curve.last().map(|(t, _)| *t) => None,
        Some(t) => Some(t),
    }
}

/// Smallest tau such that every recorded t > tau has
/// ||rho(t) - rho_inf|| < epsilon, where rho_inf is the stationary state
/// (parity-matched on even cycles).
pub fn decoherence_time(spec: &ExperimentSpec) -> Result<DecoherenceTimeResult> {
    ensure!(
        spec.epsilon > 0.0,
        "epsilon must be positive, got {}",
        spec.epsilon
    );
    if spec.params.decoherence_rate() == 0.0 {
        bail!(
            "decoherence time is undefined at p = 0: the coherent walk never \
             converges and has no stationary state"
        );
    }
    let (distance_curve, _) = distance_curve(spec)?;
    Ok(DecoherenceTimeResult {
        epsilon: spec.epsilon,
        d_epsilon: certify_threshold(&distance_curve, spec.epsilon),
        distance_curve,
    })
}

fn default_record_every() -> usize {
    1
}

fn default_backend() -> Backend {
    Backend::Fourier
}

/// Grid axes of a sweep. Values are sorted ascending before use, so row
/// order is lexicographic in (n_sites, decoherence_rate, coin_angle).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxes {
    pub n_sites: Vec<usize>,
    pub decoherence_rate: Vec<f64>,
    pub coin_angle: Vec<f64>,
}

/// Per-point run settings of a sweep.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSettings {
    pub t_max: usize,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    pub epsilon: f64,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    /// Initial coin state as [a_re, a_im, b_re, b_im]; defaults to (1, 0).
    pub initial_coin: Option<[f64; 4]>,
    pub output: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub grid: GridAxes,
    pub run: RunSettings,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: SweepConfig = toml::from_str(text).context("invalid sweep config")?;
        ensure!(!config.grid.n_sites.is_empty(), "grid axis n_sites is empty");
        ensure!(
            !config.grid.decoherence_rate.is_empty(),
            "grid axis decoherence_rate is empty"
        );
        ensure!(
            !config.grid.coin_angle.is_empty(),
            "grid axis coin_angle is empty"
        );
        ensure!(config.run.record_every >= 1, "record interval must be at least 1");
        Ok(config)
    }

    /// Grid points in lexicographic order.
    pub fn points(&self) -> Vec<(usize, f64, f64)> {
        let mut ns = self.grid.n_sites.clone();
        ns.sort_unstable();
        let mut ps = self.grid.decoherence_rate.clone();
        ps.sort_by(f64::total_cmp);
        let mut betas = self.grid.coin_angle.clone();
        betas.sort_by(f64::total_cmp);
        let mut points = Vec::with_capacity(ns.len() * ps.len() * betas.len());
        for &n in &ns {
            for &p in &ps {
                for &beta in &betas {
                    points.push((n, p, beta));
                }
            }
        }
        points
    }
}

/// Decoherence-time cell of a sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdCell {
    Time(usize),
    NotReached,
    /// No stationary state exists at this point (p = 0), or the point failed.
    Undefined,
}

/// One sweep grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub n_sites: usize,
    pub decoherence_rate: f64,
    pub coin_angle: f64,
    /// Entropies of the final recorded state; `None` when the point failed.
    pub entropy: Option<EntropyRecord>,
    pub d_epsilon: ThresholdCell,
    /// Minimum spectral gap over all momentum pairs.
    pub min_spectral_gap: Option<f64>,
    pub status: String,
}

fn min_spectral_gap(params: &WalkParams) -> Result<f64> {
    let n = params.n_sites();
    let mut min_gap = f64::INFINITY;
    for k in 0..n {
        for k_prime in 0..n {
            min_gap = min_gap.min(spectrum(k, k_prime, params)?.spectral_gap);
        }
    }
    Ok(min_gap)
}

fn sweep_point(n: usize, p: f64, beta: f64, run: &RunSettings) -> SweepRow {
    let attempt = (|| -> Result<SweepRow> {
        let coin = match run.initial_coin {
            Some([ar, ai, br, bi]) => nalgebra::Vector2::new(
                num_complex::Complex64::new(ar, ai),
                num_complex::Complex64::new(br, bi),
            ),
            None => default_coin(),
        };
        let params = WalkParams::new(n, p, beta, coin)?;
        let spec = ExperimentSpec {
            record_every: run.record_every,
            backend: run.backend,
            epsilon: run.epsilon,
            ..ExperimentSpec::new(params.clone(), run.t_max)
        };
        let (curve, final_state) = distance_curve(&spec)?;
        let entropy = mutual_information(&final_state, run.t_max)?;
        let min_gap = min_spectral_gap(&params)?;
        let (d_epsilon, status) = if p == 0.0 {
            (ThresholdCell::Undefined, "coherent: stationary state undefined")
        } else {
            match certify_threshold(&curve, run.epsilon) {
                Some(tau) => (ThresholdCell::Time(tau), "ok"),
                None => (ThresholdCell::NotReached, "ok"),
            }
        };
        Ok(SweepRow {
            n_sites: n,
            decoherence_rate: p,
            coin_angle: beta,
            entropy: Some(entropy),
            d_epsilon,
            min_spectral_gap: Some(min_gap),
            status: status.to_string(),
        })
    })();
    attempt.unwrap_or_else(|e| SweepRow {
        n_sites: n,
        decoherence_rate: p,
        coin_angle: beta,
        entropy: None,
        d_epsilon: ThresholdCell::Undefined,
        min_spectral_gap: None,
        status: format!("error: {e}"),
    })
}

/// Runs every grid point (in parallel) and returns rows in lexicographic
/// grid order. A failing point becomes a row with an error status; the rest
/// of the sweep still completes.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    let points = config.points();
    ensure!(!points.is_empty(), "sweep grid is empty");
    Ok(points
        .par_iter()
        .map(|&(n, p, beta)| sweep_point(n, p, beta, &config.run))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use cyclewalk::balanced_coin;
    use std::f64::consts::FRAC_PI_4;

    fn spec(n: usize, p: f64, t_max: usize) -> ExperimentSpec {
        ExperimentSpec::new(WalkParams::hadamard(n, p).unwrap(), t_max)
    }

    #[test]
    fn time_zero_trajectory_is_the_initial_state() {
        let rows = run_trajectory(&spec(5, 0.2, 0)).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.time, 0);
        assert!((row.position[0] - 1.0).abs() < 1e-14);
        assert!(row.position[1..].iter().all(|&p| p.abs() < 1e-14));
        assert!(row.entropy.s_total.abs() < 1e-12);
        assert!(row.entropy.s_coin.abs() < 1e-12);
        assert!(row.entropy.s_walker.abs() < 1e-12);
        assert!(row.entropy.mutual_info.abs() < 1e-12);
        assert!(row.backend_discrepancy.is_none());
    }

    #[test]
    fn recording_interval_keeps_endpoints() {
        let mut s = spec(4, 0.3, 25);
        s.record_every = 10;
        let rows = run_trajectory(&s).unwrap();
        let times: Vec<usize> = rows.iter().map(|r| r.time).collect();
        assert_eq!(times, vec![0, 10, 20, 25]);
    }

    #[test]
    fn backends_agree_and_both_mode_reports_it() {
        let mut s = spec(4, 0.5, 50);
        s.backend = Backend::Both;
        let rows = run_trajectory(&s).unwrap();
        for row in &rows {
            let gap = row.backend_discrepancy.expect("both mode sets the column");
            assert!(gap < 1e-10, "t={}: discrepancy {gap}", row.time);
        }
    }

    #[test]
    fn direct_and_fourier_trajectories_match() {
        let mut a = spec(3, 0.4, 30);
        a.backend = Backend::Direct;
        let mut b = spec(3, 0.4, 30);
        b.backend = Backend::Fourier;
        let (ra, rb) = (run_trajectory(&a).unwrap(), run_trajectory(&b).unwrap());
        assert_eq!(ra.len(), rb.len());
        for (x, y) in ra.iter().zip(&rb) {
            assert_eq!(x.time, y.time);
            assert!((x.entropy.s_total - y.entropy.s_total).abs() < 1e-9);
            assert!((x.trace_distance - y.trace_distance).abs() < 1e-9);
            for (px, py) in x.position.iter().zip(&y.position) {
                assert!((px - py).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn probability_is_conserved_along_trajectories() {
        let rows = run_trajectory(&spec(6, 0.25, 40)).unwrap();
        for row in &rows {
            let total: f64 = row.position.iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "t={}", row.time);
        }
    }

    #[test]
    fn huge_epsilon_gives_zero_decoherence_time() {
        let mut s = spec(5, 0.3, 40);
        s.epsilon = 10.0;
        let res = decoherence_time(&s).unwrap();
        assert_eq!(res.d_epsilon, Some(0));
    }

    #[test]
    fn short_runs_report_not_reached() {
        let mut s = spec(5, 0.2, 3);
        s.epsilon = 1e-3;
        let res = decoherence_time(&s).unwrap();
        assert_eq!(res.d_epsilon, None);
    }

    #[test]
    fn coherent_walks_are_rejected_for_decoherence_time() {
        let s = spec(5, 0.0, 10);
        let err = decoherence_time(&s).unwrap_err().to_string();
        assert!(err.contains("p = 0"), "{err}");
    }

    #[test]
    fn nonpositive_epsilon_is_rejected() {
        let mut s = spec(5, 0.2, 10);
        s.epsilon = 0.0;
        assert!(decoherence_time(&s).is_err());
        s.epsilon = -1.0;
        assert!(decoherence_time(&s).is_err());
    }

    #[test]
    fn certified_threshold_is_internally_consistent() {
        let mut s = spec(5, 0.25, 800);
        s.epsilon = 1e-2;
        let res = decoherence_time(&s).unwrap();
        let tau = res.d_epsilon.expect("long enough run");
        assert!(tau > 0);
        for &(t, d) in &res.distance_curve {
            if t > tau {
                assert!(d < s.epsilon, "t={t}: {d}");
            }
        }
        let at_tau = res
            .distance_curve
            .iter()
            .find(|(t, _)| *t == tau)
            .expect("tau is a recorded time");
        assert!(at_tau.1 >= s.epsilon);
    }

    #[test]
    fn threshold_certification_handles_edge_curves() {
        assert_eq!(certify_threshold(&[(0, 0.5)], 1.0), Some(0));
        assert_eq!(certify_threshold(&[(0, 1.5)], 1.0), None);
        assert_eq!(
            certify_threshold(&[(0, 1.5), (1, 0.1), (2, 0.05)], 1.0),
            Some(0)
        );
        assert_eq!(
            certify_threshold(&[(0, 1.5), (1, 1.2), (2, 0.05)], 1.0),
            Some(1)
        );
    }

    #[test]
    fn sweep_rows_come_back_in_lexicographic_order() {
        let config = SweepConfig::parse(
            r#"
            [grid]
            n_sites = [4, 3]
            decoherence_rate = [0.5, 0.25]
            coin_angle = [0.7853981633974483]

            [run]
            t_max = 60
            record_every = 10
            epsilon = 0.05
            output = "sweep.csv"
            "#,
        )
        .unwrap();
        assert_eq!(config.run.output, PathBuf::from("sweep.csv"));
        let rows = run_sweep(&config).unwrap();
        let coords: Vec<(usize, f64)> =
            rows.iter().map(|r| (r.n_sites, r.decoherence_rate)).collect();
        assert_eq!(coords, vec![(3, 0.25), (3, 0.5), (4, 0.25), (4, 0.5)]);
        for row in &rows {
            assert_eq!(row.status, "ok");
            assert!(row.entropy.is_some());
            assert!(row.min_spectral_gap.is_some());
        }
    }

    #[test]
    fn sweep_reports_failures_per_row_and_continues() {
        let config = SweepConfig::parse(
            r#"
            [grid]
            n_sites = [1, 5]
            decoherence_rate = [0.3]
            coin_angle = [0.7853981633974483]

            [run]
            t_max = 20
            epsilon = 0.5
            output = "out.csv"
            "#,
        )
        .unwrap();
        let rows = run_sweep(&config).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].status.starts_with("error:"), "{}", rows[0].status);
        assert!(rows[0].entropy.is_none());
        assert_eq!(rows[1].status, "ok");
    }

    #[test]
    fn coherent_sweep_points_have_no_decoherence_time() {
        let config = SweepConfig::parse(
            r#"
            [grid]
            n_sites = [3]
            decoherence_rate = [0.0]
            coin_angle = [0.7853981633974483]

            [run]
            t_max = 10
            epsilon = 0.5
            output = "out.csv"
            "#,
        )
        .unwrap();
        let rows = run_sweep(&config).unwrap();
        assert_eq!(rows[0].d_epsilon, ThresholdCell::Undefined);
        assert!(rows[0].status.contains("coherent"));
        assert!(rows[0].entropy.is_some());
    }

    #[test]
    fn singleton_sweep_matches_the_direct_composition() {
        let config = SweepConfig::parse(
            r#"
            [grid]
            n_sites = [5]
            decoherence_rate = [0.3]
            coin_angle = [0.7853981633974483]

            [run]
            t_max = 400
            epsilon = 0.01
            output = "out.csv"
            "#,
        )
        .unwrap();
        let rows = run_sweep(&config).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];

        let params = WalkParams::hadamard(5, 0.3).unwrap();
        let mut spec = ExperimentSpec::new(params, 400);
        spec.epsilon = 0.01;
        let last = run_trajectory(&spec).unwrap().pop().unwrap();
        let dtime = decoherence_time(&spec).unwrap();

        let e = row.entropy.unwrap();
        assert!((e.s_total - last.entropy.s_total).abs() < 1e-12);
        assert!((e.mutual_info - last.entropy.mutual_info).abs() < 1e-12);
        assert_eq!(row.d_epsilon, ThresholdCell::Time(dtime.d_epsilon.unwrap()));
    }

    #[test]
    fn sweep_config_rejects_empty_axes_and_unknown_keys() {
        let empty_axis = r#"
            [grid]
            n_sites = []
            decoherence_rate = [0.3]
            coin_angle = [0.7853981633974483]

            [run]
            t_max = 10
            epsilon = 0.5
            output = "out.csv"
        "#;
        assert!(SweepConfig::parse(empty_axis).is_err());

        let typo = r#"
            [grid]
            n_sites = [3]
            decoherence_rate = [0.3]
            coin_angle = [0.7853981633974483]

            [run]
            t_max = 10
            epsilon = 0.5
            outptu = "out.csv"
        "#;
        assert!(SweepConfig::parse(typo).is_err());
    }

    #[test]
    fn sweep_honors_a_custom_initial_coin() {
        let config = SweepConfig::parse(
            r#"
            [grid]
            n_sites = [5]
            decoherence_rate = [0.3]
            coin_angle = [0.7853981633974483]

            [run]
            t_max = 1
            epsilon = 0.5
            initial_coin = [0.7071067811865476, 0.0, 0.0, 0.7071067811865476]
            output = "out.csv"
            "#,
        )
        .unwrap();
        let rows = run_sweep(&config).unwrap();
        assert_eq!(rows[0].status, "ok");

        let params = WalkParams::new(5, 0.3, FRAC_PI_4, balanced_coin()).unwrap();
        let last = run_trajectory(&ExperimentSpec::new(params, 1))
            .unwrap()
            .pop()
            .unwrap();
        let e = rows[0].entropy.unwrap();
        assert!((e.s_total - last.entropy.s_total).abs() < 1e-12);
    }
}
