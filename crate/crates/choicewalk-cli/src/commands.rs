//! One function per subcommand, clap-free.
//!
//! Each command takes fully resolved parameters (seed already drawn, steps
//! already computed from epsilon, and so on) and returns a [`Table`] plus
//! an optional [`Chart`].  The thin layer in [`crate::cli`] handles argument
//! parsing, seed resolution, and where the bytes go.

use choicewalk::oracle::monotonicity_check_sampled;
use choicewalk::{
    build_function, builtin_policies, collision_census, derive_seed, estimate_curve,
    estimate_threshold, exact_policy_curve, exact_solo_curve, expected_never_fraction,
    monotonicity_check, optimal_rchoice_curve, policy_by_name, predict_threshold_tight,
    ratio_table_with_progress, sample_hitting, trial_rng, Error, ExactCurve, FamilySpec,
    MonotonicityReport, Process, Result,
};

use crate::output::{format_float, Cell, Table};
use crate::svg::Series;

/// Chart description attached to commands that can draw a picture.
pub struct Chart {
    pub title: String,
    pub x_label: &'static str,
    pub y_label: &'static str,
    pub series: Vec<Series>,
}

/// What a command hands back: rows for CSV/JSON plus an optional chart.
pub struct CommandResult {
    pub table: Table,
    pub chart: Option<Chart>,
}

impl CommandResult {
    fn plain(table: Table) -> Self {
        CommandResult { table, chart: None }
    }
}

/// Build a process from its CLI description.
pub fn build_process(name: &str, r: usize, policy: &str) -> Result<Process> {
    match name {
        "solo" => Ok(Process::Solo),
        "rchoice" => Ok(Process::rchoice(r, policy_by_name(policy)?)),
        "rcomplete" => Ok(Process::RComplete { r }),
        other => Err(Error::InvalidParameter(format!(
            "unknown process `{other}` (expected solo, rchoice, or rcomplete)"
        ))),
    }
}

/// Expand a time-grid specification against arity `n`.
///
/// Accepted forms: `auto` (about 128 evenly spaced points, always ending
/// at `n`), `a:b` (inclusive range), `a:b:step`, or a comma list such as
/// `0,10,25,100`.
pub fn parse_grid(spec: &str, n: usize) -> Result<Vec<usize>> {
    let bad = |reason: &str| {
        Err(Error::InvalidParameter(format!(
            "grid `{spec}`: {reason} (expected `auto`, `a:b`, `a:b:step`, or a comma list)"
        )))
    };
    if spec == "auto" {
        let step = (n / 128).max(1);
        let mut grid: Vec<usize> = (0..=n).step_by(step).collect();
        if *grid.last().unwrap() != n {
            grid.push(n);
        }
        return Ok(grid);
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() > 3 {
            return bad("too many `:` separators");
        }
        let Ok(nums) = parts
            .iter()
            .map(|p| p.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
        else {
            return bad("range bounds must be nonnegative integers");
        };
        let (a, b) = (nums[0], nums[1]);
        let step = if nums.len() == 3 { nums[2] } else { 1 };
        if step == 0 {
            return bad("step must be positive");
        }
        if a > b {
            return bad("range start exceeds range end");
        }
        return Ok((a..=b).step_by(step).collect());
    }
    let Ok(grid) = spec
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<usize>, _>>()
    else {
        return bad("entries must be nonnegative integers");
    };
    if grid.is_empty() {
        return bad("no grid points");
    }
    Ok(grid)
}

/// `simulate`: raw hitting times, one row per trial.
pub fn simulate(
    family: &str,
    process: &Process,
    trials: usize,
    seed: u64,
) -> Result<CommandResult> {
    let f = build_function(family)?;
    let samples = sample_hitting(f.as_ref(), process, trials, seed)?;
    let mut table = Table::new(&["trial", "hitting_time", "useful_proposals"]);
    table.note(format!("family: {family}"));
    table.note(format!("process: {process}"));
    table.note(format!("arity: {}", f.arity()));
    for sample in samples {
        table.push_row(vec![
            Cell::UInt(sample.trial),
            Cell::UInt(sample.hitting_time as u64),
            match sample.useful_proposal_steps {
                Some(count) => Cell::UInt(count),
                None => Cell::Empty,
            },
        ]);
    }
    Ok(CommandResult::plain(table))
}

/// `curve`: estimated activation curve over a time grid.
pub fn curve(
    family: &str,
    process: &Process,
    trials: usize,
    grid_spec: &str,
    seed: u64,
) -> Result<CommandResult> {
    let f = build_function(family)?;
    let grid = parse_grid(grid_spec, f.arity())?;
    let estimate = estimate_curve(f.as_ref(), process, trials, &grid, seed)?;
    let mut table = Table::new(&["t", "p", "ci_lo", "ci_hi"]);
    table.note(format!("family: {family}"));
    table.note(format!("process: {process}"));
    table.note(format!("trials: {trials}"));
    let mut points = Vec::with_capacity(estimate.points.len());
    for point in &estimate.points {
        table.push_row(vec![
            Cell::UInt(point.t as u64),
            Cell::Float(point.estimate),
            Cell::Float(point.ci_low),
            Cell::Float(point.ci_high),
        ]);
        points.push((point.t as f64, point.estimate));
    }
    let chart = Chart {
        title: format!("{family} under {process}"),
        x_label: "steps t",
        y_label: "activation probability",
        series: vec![Series {
            name: format!("{process}"),
            points,
        }],
    };
    Ok(CommandResult {
        table,
        chart: Some(chart),
    })
}

/// `threshold`: lower-median hitting time with a 99% sign-test interval.
pub fn threshold(
    family: &str,
    process: &Process,
    trials: usize,
    seed: u64,
) -> Result<CommandResult> {
    let f = build_function(family)?;
    let estimate = estimate_threshold(f.as_ref(), process, trials, seed)?;
    let mut table = Table::new(&["family", "process", "trials", "point", "ci_lo", "ci_hi"]);
    table.push_row(vec![
        Cell::Text(family.to_string()),
        Cell::Text(format!("{process}")),
        Cell::UInt(trials as u64),
        Cell::UInt(estimate.point as u64),
        Cell::UInt(estimate.ci_low as u64),
        Cell::UInt(estimate.ci_high as u64),
    ]);
    Ok(CommandResult::plain(table))
}

/// Instantiate ratio families: templates containing `{}` expand over the
/// scale list, literal specs pass through unchanged.
pub fn expand_families(templates: &[String], ns: &[usize]) -> Result<Vec<FamilySpec>> {
    if templates.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one --family is required".to_string(),
        ));
    }
    let mut specs = Vec::new();
    for template in templates {
        if template.contains("{}") {
            if ns.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "family template `{template}` has a `{{}}` placeholder but no --ns list was given"
                )));
            }
            for &n in ns {
                specs.push(
                    template
                        .replace("{}", &n.to_string())
                        .parse::<FamilySpec>()?,
                );
            }
        } else {
            specs.push(template.parse::<FamilySpec>()?);
        }
    }
    Ok(specs)
}

/// `ratio`: the fast/slow diagnostic table rho = r*T_r/T_1 across scales.
pub fn ratio(
    templates: &[String],
    ns: &[usize],
    r: usize,
    policy: &str,
    trials: usize,
    seed: u64,
    progress: bool,
) -> Result<CommandResult> {
    let specs = expand_families(templates, ns)?;
    let process = build_process("rchoice", r, policy)?;
    let rows = ratio_table_with_progress(&specs, &process, trials, seed, |row| {
        if progress {
            eprintln!(
                "ratio: {} done (T1={}, T{}={}, rho={:.3})",
                row.family, row.solo.point, row.r, row.choice.point, row.rho
            );
        }
    })?;
    let mut table = Table::new(&[
        "family", "n", "r", "policy", "T1", "T1_lo", "T1_hi", "Tr", "Tr_lo", "Tr_hi", "rho",
        "rho_lo", "rho_hi",
    ]);
    table.note(format!("trials: {trials} per estimate"));
    for row in &rows {
        table.push_row(vec![
            Cell::Text(row.family.clone()),
            Cell::UInt(row.scale as u64),
            Cell::UInt(row.r as u64),
            Cell::Text(policy.to_string()),
            Cell::UInt(row.solo.point as u64),
            Cell::UInt(row.solo.ci_low as u64),
            Cell::UInt(row.solo.ci_high as u64),
            Cell::UInt(row.choice.point as u64),
            Cell::UInt(row.choice.ci_low as u64),
            Cell::UInt(row.choice.ci_high as u64),
            Cell::Float(row.rho),
            Cell::Float(row.rho_ci_low),
            Cell::Float(row.rho_ci_high),
        ]);
    }
    // One chart series per template, points ordered like the expansion.
    let mut series = Vec::new();
    let mut cursor = 0usize;
    for template in templates {
        let count = if template.contains("{}") { ns.len() } else { 1 };
        let points = rows[cursor..cursor + count]
            .iter()
            .map(|row| (row.scale as f64, row.rho))
            .collect();
        series.push(Series {
            name: template.clone(),
            points,
        });
        cursor += count;
    }
    let chart = Chart {
        title: format!("speedup ratio, r={r}, policy={policy}"),
        x_label: "instance scale n",
        y_label: "rho = r*T_r/T_1",
        series,
    };
    Ok(CommandResult {
        table,
        chart: Some(chart),
    })
}

fn curve_to_table(curve: &ExactCurve, family: &str, label: &str) -> Table {
    let mut table = Table::new(&["t", "p"]);
    table.note(format!("family: {family}"));
    table.note(format!("mode: {label}"));
    table.note(format!("exact: {}", curve.is_exact()));
    if !curve.is_exact() {
        table.note(format!(
            "error_bound: {}",
            format_float(curve.error_bound())
        ));
    }
    match curve.threshold() {
        Some(t) => table.note(format!("threshold: {t}")),
        None => table.note("threshold: none (curve never reaches 1/2)"),
    }
    for t in 0..=curve.arity() {
        table.push_row(vec![Cell::UInt(t as u64), Cell::Float(curve.value(t))]);
    }
    table
}

/// `exact`: dynamic-programming curves for small arities.
pub fn exact(family: &str, mode: &str, r: usize, policy: &str) -> Result<CommandResult> {
    let f = build_function(family)?;
    let (curve, label) = match mode {
        "solo" => (exact_solo_curve(f.as_ref())?, "solo".to_string()),
        "policy" => {
            let p = policy_by_name(policy)?;
            (
                exact_policy_curve(f.as_ref(), p.as_ref(), r)?,
                format!("policy r={r} {policy}"),
            )
        }
        "optimal" => (
            optimal_rchoice_curve(f.as_ref(), r)?,
            format!("optimal r={r}"),
        ),
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown exact mode `{other}` (expected solo, policy, or optimal)"
            )))
        }
    };
    Ok(CommandResult::plain(curve_to_table(&curve, family, &label)))
}

/// `census`: never/once/twice-plus proposal multiplicities on an inactive
/// ground set, with the closed-form expectation alongside.
pub fn census(n: usize, r: usize, steps: usize, reps: usize, seed: u64) -> Result<CommandResult> {
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be positive".to_string()));
    }
    let mut table = Table::new(&[
        "rep",
        "never",
        "once",
        "twice_plus",
        "never_frac",
        "once_frac",
        "twice_plus_frac",
    ]);
    let expected = expected_never_fraction(n, r, steps);
    let mut mean = 0.0;
    for rep in 0..reps {
        let mut rng = trial_rng(seed, rep as u64);
        let counts = collision_census(n, r, steps, &mut rng)?;
        mean += counts.never_fraction();
        table.push_row(vec![
            Cell::UInt(rep as u64),
            Cell::UInt(counts.never),
            Cell::UInt(counts.once),
            Cell::UInt(counts.twice_plus),
            Cell::Float(counts.never_fraction()),
            Cell::Float(counts.once_fraction()),
            Cell::Float(counts.twice_plus_fraction()),
        ]);
    }
    mean /= reps as f64;
    table.note(format!("expected_never_frac: {}", format_float(expected)));
    table.note(format!("mean_never_frac: {}", format_float(mean)));
    Ok(CommandResult::plain(table))
}

/// `diagnose`: monotonicity audit plus the restriction trace, with the
/// tight-threshold prediction wherever its inputs are available.
pub fn diagnose(
    family: &str,
    prefixes: &[usize],
    trials: usize,
    r: usize,
    seed: u64,
) -> Result<CommandResult> {
    let f = build_function(family)?;
    let n = f.arity();
    let mut table = Table::new(&[
        "s",
        "active",
        "relevant",
        "relevant_exact",
        "contraction_T1",
        "T1_lo",
        "T1_hi",
    ]);
    table.note(format!("family: {family}"));
    table.note(format!("arity: {n}"));

    // Cheap structural audit first: exact when the cube is enumerable,
    // sampled otherwise.
    const EXACT_MONOTONE_ARITY: usize = 16;
    const SAMPLED_PAIRS: usize = 4096;
    let report = if n <= EXACT_MONOTONE_ARITY {
        (monotonicity_check(f.as_ref())?, "exact")
    } else {
        let mut rng = trial_rng(derive_seed(seed, 0x6d6f_6e6f), 0);
        (
            monotonicity_check_sampled(f.as_ref(), SAMPLED_PAIRS, &mut rng)?,
            "sampled",
        )
    };
    match report {
        (MonotonicityReport::Monotone, how) => {
            let detail = if how == "exact" {
                "exact".to_string()
            } else {
                format!("sampled, {SAMPLED_PAIRS} pairs")
            };
            table.note(format!("monotonicity: ok ({detail})"));
        }
        (MonotonicityReport::Violation { lower, upper }, _) => {
            table.note(format!(
                "monotonicity: VIOLATION lower={lower:?} upper={upper:?}"
            ));
        }
    }

    let rows = choicewalk::restriction_diagnostics(f.as_ref(), prefixes, trials, seed)?;
    for row in &rows {
        let (t1, lo, hi) = match &row.contraction_t1 {
            Some(est) => (
                Cell::UInt(est.point as u64),
                Cell::UInt(est.ci_low as u64),
                Cell::UInt(est.ci_high as u64),
            ),
            None => (Cell::Empty, Cell::Empty, Cell::Empty),
        };
        table.push_row(vec![
            Cell::UInt(row.prefix as u64),
            Cell::Bool(row.active),
            match row.relevant {
                Some(k) => Cell::UInt(k as u64),
                None => Cell::Empty,
            },
            Cell::Bool(row.relevant_exact),
            t1,
            lo,
            hi,
        ]);
        if let (Some(relevant), Some(est)) = (row.relevant, &row.contraction_t1) {
            let free = n - row.prefix;
            if let Ok(prediction) = predict_threshold_tight(est.point, relevant, free, r) {
                let boundary = if prediction.degenerate {
                    " (boundary)"
                } else {
                    ""
                };
                table.note(format!(
                    "predicted_T{r} after s={}: {}{boundary}",
                    row.prefix,
                    format_float(prediction.value)
                ));
            }
        }
    }
    Ok(CommandResult::plain(table))
}

/// Policy blurbs for the `families` listing; names come from the library.
fn policy_description(name: &str) -> &'static str {
    match name {
        "uniform" => "pick uniformly among the proposed bits",
        "greedy_useful" => "prefer proposals the current restriction still depends on",
        "connectivity_two_phase" => {
            "lowest index until the giant component absorbs all but v^(2/3) vertices, then prefer component-merging edges"
        }
        "connectivity_two_phase_fixed" => {
            "lowest index for ceil(v*lnln v) steps, then prefer component-merging edges"
        }
        "min_degree" => "prefer edges touching a minimum-degree vertex",
        _ => "",
    }
}

/// `families`: list available function families and agent policies.
pub fn families() -> Result<CommandResult> {
    let mut table = Table::new(&["item", "name", "details"]);
    for (kind, params) in FamilySpec::kinds() {
        table.push_row(vec![
            Cell::Text("family".to_string()),
            Cell::Text(kind.to_string()),
            Cell::Text(params.to_string()),
        ]);
    }
    for name in builtin_policies() {
        table.push_row(vec![
            Cell::Text("policy".to_string()),
            Cell::Text(name.to_string()),
            Cell::Text(policy_description(name).to_string()),
        ]);
    }
    Ok(CommandResult::plain(table))
}
