use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;

use qmc_core::cubature::{
    integrate, CriterionSpec, CubatureResult, SamplerSpec, Termination, ToleranceSpec,
};
use qmc_core::format::{
    fmt17, json_number, json_string, read_points_csv, write_csv_header, write_points_rows,
};
use qmc_core::integrands::{asian_call_problem, keister_problem, AsianCall, Problem};
use qmc_core::ld::defaults::{DIRECTION_NUMBERS_FILE, LATTICE_VECTOR_FILE};
use qmc_core::ld::{
    child_seed, parse_direction_numbers, parse_lattice_vector, Family, Ordering, PointBlock,
    Warning,
};
use qmc_core::measures::{isotropic_gaussian_transform, kumaraswamy_transform, TransformLadder};
use qmc_core::quality::{centered_l2_discrepancy, stratification_check};
use qmc_core::QmcError;

use crate::args::*;
use crate::svg;

pub const DATA_DIR_ENV: &str = "QMC_DATA_DIR";

/// Rows generated per chunk when streaming points.
const CHUNK: u64 = 1 << 16;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(QmcError),
    Io(PathBuf, io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(QmcError::Usage(_) | QmcError::Domain(_)) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) if p.as_os_str().is_empty() => write!(f, "i/o error: {e}"),
            CliError::Io(p, e) => write!(f, "i/o error on {}: {e}", p.display()),
        }
    }
}

impl From<QmcError> for CliError {
    fn from(e: QmcError) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

struct Sink {
    path: PathBuf,
    w: Box<dyn Write>,
}

impl Sink {
    fn open(path: Option<&Path>) -> Result<Self> {
        Ok(match path {
            Some(p) => Sink {
                path: p.to_path_buf(),
                w: Box::new(BufWriter::new(
                    File::create(p).map_err(|e| CliError::Io(p.to_path_buf(), e))?,
                )),
            },
            None => Sink {
                path: PathBuf::new(),
                w: Box::new(BufWriter::new(io::stdout().lock())),
            },
        })
    }

    fn io<T>(&self, r: io::Result<T>) -> Result<T> {
        r.map_err(|e| CliError::Io(self.path.clone(), e))
    }

    fn write_str(&mut self, s: &str) -> Result<()> {
        let r = self.w.write_all(s.as_bytes());
        self.io(r)
    }

    fn finish(mut self) -> Result<()> {
        let r = self.w.flush();
        self.io(r)
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

pub fn sampler_spec(args: &SamplerArgs, default_family: Family) -> Result<SamplerSpec> {
    let family: Family = args.family.map(Into::into).unwrap_or(default_family);
    let mut spec =
        SamplerSpec::new(family, args.seed).with_randomization(args.randomize.kind(family));
    if let Some(o) = args.ordering {
        spec = spec.with_ordering(o.into());
    }
    let data_file =
        |name: &str| std::env::var_os(DATA_DIR_ENV).map(|dir| PathBuf::from(dir).join(name));
    match family {
        Family::Lattice => {
            if let Some(path) = args
                .gen_file
                .clone()
                .or_else(|| data_file(LATTICE_VECTOR_FILE))
            {
                spec = spec.with_lattice_vector(Arc::new(parse_lattice_vector(&path)?));
            }
        }
        Family::DigitalNet => {
            if let Some(path) = args
                .gen_file
                .clone()
                .or_else(|| data_file(DIRECTION_NUMBERS_FILE))
            {
                spec = spec.with_matrices(Arc::new(parse_direction_numbers(&path, None)?));
            }
        }
        Family::Halton | Family::Iid => {
            if args.gen_file.is_some() {
                return Err(usage(format!(
                    "--gen-file does not apply to {family} points"
                )));
            }
        }
    }
    Ok(spec)
}

pub fn build_problem(p: &ProblemArgs, d: Option<usize>) -> Result<Problem> {
    match p.problem {
        ProblemArg::Keister => {
            let d = d.unwrap_or(5);
            if d == 0 {
                return Err(usage("--d must be at least 1"));
            }
            let ladder = match p.ladder {
                LadderArg::Default => None,
                LadderArg::Lebesgue => Some(TransformLadder::lebesgue(d)?),
                LadderArg::Gauss => Some(TransformLadder::matching(isotropic_gaussian_transform(
                    d,
                    p.ladder_var,
                )?)),
                LadderArg::GaussKuma => {
                    let kuma = kumaraswamy_transform(vec![p.kuma_alpha; d], vec![p.kuma_beta; d])?;
                    let gauss = isotropic_gaussian_transform(d, 1.0)?;
                    let target = gauss.measure().clone();
                    Some(TransformLadder::new(vec![kuma, gauss], target)?)
                }
            };
            Ok(keister_problem(d, ladder)?)
        }
        ProblemArg::AsianCall => {
            if p.ladder != LadderArg::Default {
                return Err(usage(
                    "--ladder applies to the keister problem; use --drift for asian-call",
                ));
            }
            let opt = AsianCall {
                s0: p.s0,
                strike: p.strike,
                rate: p.rate,
                sigma: p.sigma,
                tau: p.tau,
                d: d.unwrap_or(16),
            };
            Ok(asian_call_problem(opt, p.drift)?)
        }
    }
}

pub fn criterion_spec(name: &str, args: &CriterionArgs) -> Result<CriterionSpec> {
    let mut c = CriterionSpec::by_name(name)?;
    if args.replications.is_some() && !matches!(c, CriterionSpec::QmcReplications(_)) {
        return Err(usage("--replications applies only to qmc-rep"));
    }
    match &mut c {
        CriterionSpec::QmcReplications(p) => {
            p.m_min = args.m_min.unwrap_or(p.m_min);
            p.m_max = args.m_max.unwrap_or(p.m_max);
            p.replications = args.replications.unwrap_or(p.replications);
        }
        CriterionSpec::NetCoeffDecay(p) | CriterionSpec::LatticeCoeffDecay(p) => {
            p.m_min = args.m_min.unwrap_or(p.m_min);
            p.m_max = args.m_max.unwrap_or(p.m_max);
        }
        CriterionSpec::McClt(p) => {
            for m in [args.m_min, args.m_max].into_iter().flatten() {
                if m > 62 {
                    return Err(usage(format!("2^{m} samples is beyond any budget")));
                }
            }
            if let Some(m) = args.m_min {
                p.n_pilot = 1 << m;
            }
            if let Some(m) = args.m_max {
                p.n_max = 1 << m;
            }
        }
    }
    Ok(c)
}

fn tolerance(abs_tol: f64, rel_tol: f64) -> Result<ToleranceSpec> {
    Ok(ToleranceSpec::new(abs_tol, rel_tol)?)
}

fn warn_once(warnings: &[Warning], shown: &mut bool) {
    if !*shown {
        for w in warnings {
            eprintln!("warning: {w}");
        }
        *shown = !warnings.is_empty();
    }
}

/// Exit status of a successful run: 0, or 3 when a budget ran out.
pub type Status = i32;

pub fn cmd_points(a: &PointsArgs) -> Result<Status> {
    let spec = sampler_spec(&a.sampler, Family::Lattice)?;
    let d = a.sampler.d.unwrap_or(2);
    if a.n_start > a.n_end {
        return Err(usage(format!(
            "--n-start ({}) exceeds --n-end ({})",
            a.n_start, a.n_end
        )));
    }
    let format = a.out.format.unwrap_or(Format::Csv);
    if format == Format::Svg {
        return Err(usage("points are written as csv or json"));
    }
    let mut sampler = spec.build(d, spec.seed)?;
    // fail on capacity before writing anything
    if spec.ordering == Ordering::Linear {
        sampler.points(a.n_start, a.n_end)?;
    } else if spec.family != Family::Iid {
        sampler.points(a.n_end, a.n_end)?;
    }
    let mut out = Sink::open(a.out.output.as_deref())?;
    match format {
        Format::Csv => {
            let r = write_csv_header(&mut out.w, d);
            out.io(r)?;
        }
        _ => out.write_str(&format!(
            "{{\"family\":{},\"ordering\":{},\"randomization\":{},\"seed\":{},\"d\":{d},\"n_start\":{},\"n_end\":{},\"points\":[",
            json_string(spec.family.name()),
            json_string(spec.ordering.name()),
            json_string(spec.randomization.name()),
            spec.seed,
            a.n_start,
            a.n_end
        ))?,
    }
    let mut shown = false;
    let mut first_row = true;
    let mut emit = |block: &PointBlock, out: &mut Sink| -> Result<()> {
        warn_once(block.warnings(), &mut shown);
        match format {
            Format::Csv => {
                let r = write_points_rows(&mut out.w, block);
                out.io(r)
            }
            _ => {
                let mut s = String::new();
                for row in block.rows() {
                    if !first_row {
                        s.push(',');
                    }
                    first_row = false;
                    let vals: Vec<String> = row.iter().map(|&v| json_number(v)).collect();
                    s.push('[');
                    s.push_str(&vals.join(","));
                    s.push(']');
                }
                out.write_str(&s)
            }
        }
    };
    if spec.ordering == Ordering::Linear {
        emit(&sampler.points(a.n_start, a.n_end)?, &mut out)?;
    } else {
        // IID streams cannot seek: draw and drop the first n_start points
        let mut i = if spec.family == Family::Iid {
            0
        } else {
            a.n_start
        };
        while i < a.n_end {
            let j = (i + CHUNK).min(a.n_end);
            let lo = i.max(a.n_start);
            let block = sampler.points(i, j)?;
            if lo < j {
                let block = if lo > i {
                    block.slice((lo - i) as usize, (j - i) as usize)
                } else {
                    block
                };
                emit(&block, &mut out)?;
            }
            i = j;
        }
        if a.n_start == a.n_end && spec.family != Family::Iid {
            warn_once(sampler.points(a.n_start, a.n_start)?.warnings(), &mut shown);
        }
    }
    if format == Format::Json {
        out.write_str("]}\n")?;
    }
    out.finish()?;
    Ok(0)
}

pub fn cmd_integrate(a: &IntegrateArgs) -> Result<Status> {
    let criterion = criterion_spec(&a.criterion, &a.criterion_args)?;
    let spec = sampler_spec(&a.sampler, criterion.default_family())?;
    let problem = build_problem(&a.problem, a.sampler.d)?;
    let tol = tolerance(a.criterion_args.abs_tol, a.criterion_args.rel_tol)?;
    let r = integrate(&problem, &spec, &criterion, &tol)?;
    let with_time = !a.out.no_time;
    let text = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => r.to_json(with_time) + "\n",
        Format::Csv => format!(
            "problem,d,estimate,n,error_bound,tolerance,time_sec,criterion,converged\n{},{},{},{},{},{},{},{},{}\n",
            problem.name(),
            problem.dim(),
            fmt17(r.estimate),
            r.n_total,
            fmt17(r.error_bound),
            fmt17(r.tolerance),
            if with_time { fmt17(r.elapsed_seconds) } else { String::new() },
            r.criterion,
            r.converged()
        ),
        Format::Svg => return Err(usage("integrate writes json or csv")),
    };
    let mut out = Sink::open(a.out.output.as_deref())?;
    out.write_str(&text)?;
    out.finish()?;
    if !r.flags.is_empty() {
        eprintln!("warning: coefficient decay looks irregular; the error bound may be unreliable");
    }
    Ok(match r.termination {
        Termination::Converged => 0,
        Termination::BudgetExhausted => {
            eprintln!("warning: sample budget exhausted before the tolerance was met");
            3
        }
    })
}

struct CompareRow {
    tolerance: f64,
    method: String,
    result: CubatureResult,
}

pub fn cmd_compare(a: &CompareArgs) -> Result<Status> {
    if a.methods.is_empty() || a.tolerances.is_empty() {
        return Err(usage("compare needs at least one method and one tolerance"));
    }
    let problem = build_problem(&a.problem, a.sampler.d)?;
    let mut jobs = Vec::new();
    for &t in &a.tolerances {
        for m in &a.methods {
            let criterion = criterion_spec(m.trim(), &a.criterion_args)?;
            let spec = sampler_spec(&a.sampler, criterion.default_family())?;
            jobs.push((
                t,
                m.trim().to_string(),
                criterion,
                spec,
                tolerance(t, a.criterion_args.rel_tol)?,
            ));
        }
    }
    // results come back in job order whatever the completion order
    let rows: Vec<CompareRow> = jobs
        .into_par_iter()
        .map(|(t, method, criterion, spec, tol)| {
            integrate(&problem, &spec, &criterion, &tol).map(|result| CompareRow {
                tolerance: t,
                method,
                result,
            })
        })
        .collect::<std::result::Result<_, _>>()?;
    let with_time = !a.out.no_time;
    let oracle = problem.oracle();
    let format = a.out.format.unwrap_or(Format::Csv);
    let text = match format {
        Format::Csv => {
            let mut s = String::from("tolerance,method,n,time_sec,estimate,abs_error_vs_oracle\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt17(r.tolerance),
                    r.method,
                    r.result.n_total,
                    if with_time {
                        fmt17(r.result.elapsed_seconds)
                    } else {
                        String::new()
                    },
                    fmt17(r.result.estimate),
                    oracle
                        .map(|o| fmt17((r.result.estimate - o).abs()))
                        .unwrap_or_default()
                ));
            }
            s
        }
        Format::Json => {
            let items: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "{{\"tolerance\":{},\"method\":{},\"n\":{},\"time_sec\":{},\"estimate\":{},\"abs_error_vs_oracle\":{}}}",
                        json_number(r.tolerance),
                        json_string(&r.method),
                        r.result.n_total,
                        if with_time { json_number(r.result.elapsed_seconds) } else { "null".into() },
                        json_number(r.result.estimate),
                        oracle.map(|o| json_number((r.result.estimate - o).abs())).unwrap_or_else(|| "null".into())
                    )
                })
                .collect();
            format!("[{}]\n", items.join(","))
        }
        Format::Svg => chart(&rows, &a.methods, with_time),
    };
    let mut out = Sink::open(a.out.output.as_deref())?;
    out.write_str(&text)?;
    out.finish()?;
    if let Some(path) = &a.svg {
        write_file(path, &chart(&rows, &a.methods, with_time))?;
    }
    for r in rows.iter().filter(|r| !r.result.converged()) {
        eprintln!(
            "warning: {} exhausted its budget at tolerance {}",
            r.method, r.tolerance
        );
    }
    Ok(0)
}

fn chart(rows: &[CompareRow], methods: &[String], with_time: bool) -> String {
    let series = |f: &dyn Fn(&CubatureResult) -> f64| -> Vec<svg::Series> {
        methods
            .iter()
            .map(|m| svg::Series {
                name: m.trim().to_string(),
                points: rows
                    .iter()
                    .filter(|r| r.method == m.trim())
                    .map(|r| (r.tolerance, f(&r.result)))
                    .collect(),
            })
            .collect()
    };
    let mut panels = vec![svg::Panel {
        title: "sample size".into(),
        x_label: "absolute tolerance".into(),
        y_label: "n".into(),
        series: series(&|r| r.n_total as f64),
    }];
    if with_time {
        panels.push(svg::Panel {
            title: "run time".into(),
            x_label: "absolute tolerance".into(),
            y_label: "seconds".into(),
            series: series(&|r| r.elapsed_seconds),
        });
    }
    svg::render(&panels)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    0.5 * (v[(k - 1) / 2] + v[k / 2])
}

fn generate(
    spec: &SamplerSpec,
    d: usize,
    n_start: u64,
    n_end: u64,
    seed: u64,
) -> Result<PointBlock> {
    let mut s = spec.build(d, seed)?;
    if spec.family == Family::Iid && n_start > 0 {
        s.points(0, n_start)?;
    }
    Ok(s.points(n_start, n_end)?)
}

pub fn cmd_discrepancy(a: &DiscrepancyArgs) -> Result<Status> {
    let spec = sampler_spec(&a.sampler, Family::DigitalNet)?;
    let d = a.sampler.d.unwrap_or(2);
    let block = match &a.input {
        Some(path) => {
            if a.compare_iid {
                return Err(usage(
                    "--compare-iid generates its own points; drop --input",
                ));
            }
            read_points_csv(path)?
        }
        None => {
            let b = generate(&spec, d, a.n_start, a.n_end, spec.seed)?;
            let mut shown = false;
            warn_once(b.warnings(), &mut shown);
            b
        }
    };
    let n = block.n();
    let cd = centered_l2_discrepancy(&block)?;
    let strat = if n.is_power_of_two() {
        Some(stratification_check(&block, n.trailing_zeros())?)
    } else {
        None
    };
    let comparison = if a.compare_iid {
        if a.seeds == 0 {
            return Err(usage("--seeds must be positive"));
        }
        let iid = SamplerSpec::iid(spec.seed);
        let (ld, base): (Vec<f64>, Vec<f64>) = (0..a.seeds)
            .into_par_iter()
            .map(|s| -> Result<(f64, f64)> {
                let x = generate(&spec, d, a.n_start, a.n_end, child_seed(spec.seed, s))?;
                let y = generate(&iid, d, a.n_start, a.n_end, child_seed(spec.seed, s))?;
                Ok((centered_l2_discrepancy(&x)?, centered_l2_discrepancy(&y)?))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        Some((median(ld), median(base)))
    } else {
        None
    };
    let text = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut s = format!("{{\"n\":{n},\"d\":{},\"cd\":{}", block.d(), json_number(cd));
            s.push_str(",\"stratified\":");
            match &strat {
                Some(v) => {
                    let v: Vec<&str> = v
                        .iter()
                        .map(|&b| if b { "true" } else { "false" })
                        .collect();
                    s.push_str(&format!("[{}]", v.join(",")));
                }
                None => s.push_str("null"),
            }
            if let Some((ld, base)) = comparison {
                s.push_str(&format!(
                    ",\"seeds\":{},\"median_cd\":{},\"median_cd_iid\":{},\"ld_better\":{}",
                    a.seeds,
                    json_number(ld),
                    json_number(base),
                    ld < base
                ));
            }
            s.push_str("}\n");
            s
        }
        Format::Csv => {
            let mut s = String::from("n,d,cd");
            if comparison.is_some() {
                s.push_str(",median_cd,median_cd_iid,ld_better");
            }
            s.push_str(&format!("\n{n},{},{}", block.d(), fmt17(cd)));
            if let Some((ld, base)) = comparison {
                s.push_str(&format!(",{},{},{}", fmt17(ld), fmt17(base), ld < base));
            }
            s.push('\n');
            s
        }
        Format::Svg => return Err(usage("discrepancy writes json or csv")),
    };
    let mut out = Sink::open(a.out.output.as_deref())?;
    out.write_str(&text)?;
    out.finish()?;
    Ok(0)
}
