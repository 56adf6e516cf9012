use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tailbound_core::oracles::{
    discrete_atoms_oracle, khintchine_grid_oracle, monte_carlo_tail, symmetric_lp_oracle,
    OracleReport, TailEstimate,
};
use tailbound_core::{
    bound, extremal_for, DistributionClass, Error, ExtremalWitness, IntervalSpec,
    MixtureDistribution, TailBound,
};

use crate::args::{
    BoundArgs, CapabilityArgs, Emit, ExtremalArgs, IntervalArgs, OracleKind, SweepArgs, Table1Args,
    UMode, VerifyArgs,
};
use crate::capability::{self, CapabilityInput};
use crate::config::Config;
use crate::error::CliError;
use crate::format::{json, number};

type Result<T> = std::result::Result<T, CliError>;

fn interval_of(a: &IntervalArgs) -> Result<IntervalSpec> {
    Ok(IntervalSpec::new(a.u_or_inf(), a.v)?)
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Bound for `class`, turning a range error into one that carries the
/// class-All value.
pub fn sharp_bound(
    class: DistributionClass,
    interval: IntervalSpec,
    cfg: &Config,
) -> Result<TailBound> {
    match bound(class, interval) {
        Ok(b) => Ok(b),
        Err(Error::OutOfTheoremRange(m)) => {
            let all = bound(DistributionClass::All, interval)?;
            Err(CliError::Range(format!(
                "{m}; class-all bound {} (not sharp for requested class)",
                number(all.value, cfg.precision)
            )))
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct BoundOutput<'a> {
    class: DistributionClass,
    u: Option<f64>,
    v: f64,
    value: f64,
    regime: &'a str,
    theorem: &'a str,
    conditions_ok: bool,
}

pub fn bound_cmd(a: &BoundArgs, cfg: &Config, out: &mut dyn Write) -> Result<()> {
    let interval = interval_of(&a.interval)?;
    let class = a.interval.class;
    let b = sharp_bound(class, interval, cfg)?;
    let p = cfg.precision;
    if a.json {
        let o = BoundOutput {
            class,
            u: finite(interval.u()),
            v: interval.v(),
            value: b.value,
            regime: &b.regime,
            theorem: &b.theorem,
            conditions_ok: b.conditions_ok,
        };
        writeln!(out, "{}", json(&o, p))?;
    } else {
        writeln!(out, "class:   {class}")?;
        writeln!(out, "u:       {}", number(interval.u(), p))?;
        writeln!(out, "v:       {}", number(interval.v(), p))?;
        writeln!(out, "value:   {}", number(b.value, p))?;
        writeln!(out, "regime:  {}", b.regime)?;
        writeln!(out, "theorem: {}", b.theorem)?;
        if let Some(n) = &b.note {
            writeln!(out, "note:    {n}")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CapabilityOutput<'a> {
    input: &'a CapabilityInput,
    u: f64,
    v: f64,
    rows: &'a [capability::CapabilityRow],
}

pub fn capability_cmd(a: &CapabilityArgs, cfg: &Config, out: &mut dyn Write) -> Result<()> {
    let input = match (&a.data, &a.column, a.mean, a.sd) {
        (Some(path), Some(column), _, _) => {
            let file = fs::File::open(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let values = capability::read_column(file, column)?;
            let (mean, sd) = capability::sample_moments(&values)?;
            CapabilityInput::new(a.lsl, a.usl, mean, sd, Some(values.len()))?
        }
        (None, None, Some(mean), Some(sd)) => CapabilityInput::new(a.lsl, a.usl, mean, sd, None)?,
        _ => {
            return Err(CliError::Input(
                "give either --mean and --sd, or --data and --column".into(),
            ))
        }
    };
    let rows = capability::report(&input)?;
    let p = cfg.precision;
    if a.json {
        let o = CapabilityOutput {
            input: &input,
            u: input.u(),
            v: input.v(),
            rows: &rows,
        };
        writeln!(out, "{}", json(&o, p))?;
        return Ok(());
    }
    if let Some(n) = input.n {
        writeln!(
            out,
            "n = {n}, mean = {}, sd = {}",
            number(input.mean, p),
            number(input.sd, p)
        )?;
    }
    writeln!(
        out,
        "u = {}, v = {} (SD units)",
        number(input.u(), p),
        number(input.v(), p)
    )?;
    writeln!(out, "{:<14} {:<24} {:>8}  regime", "class", "bound", "ppm")?;
    for r in &rows {
        match (r.bound, r.ppm) {
            (Some(b), Some(ppm)) => writeln!(
                out,
                "{:<14} {:<24} {:>8}  {}",
                r.class.to_string(),
                number(b, p),
                ppm,
                r.regime.as_deref().unwrap_or("")
            )?,
            _ => writeln!(out, "{:<14} {}", r.class.to_string(), r.status)?,
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct WitnessCheck {
    source: &'static str,
    tail: f64,
    mean: f64,
    variance: f64,
    second_moment: f64,
    feasible: bool,
    attains_bound: bool,
}

#[derive(Serialize)]
struct MonteCarloReport {
    oracle: &'static str,
    estimate: f64,
    standard_error: f64,
    n: u64,
    seed: u64,
    target: f64,
    within_4se: bool,
}

#[derive(Serialize)]
#[serde(untagged)]
enum OracleOutput {
    Grid(OracleReport),
    MonteCarlo(MonteCarloReport),
}

#[derive(Serialize)]
struct VerifyOutput {
    class: DistributionClass,
    u: Option<f64>,
    v: f64,
    bound: f64,
    regime: String,
    witness: WitnessCheck,
    oracle: OracleOutput,
    sound: bool,
    approaches: Option<bool>,
}

/// Reads either a full witness record or a bare `{atoms, segments}` object.
pub fn load_witness(path: &Path) -> Result<(MixtureDistribution, Option<ExtremalWitness>)> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if let Ok(w) = serde_json::from_str::<ExtremalWitness>(&text) {
        return Ok((w.distribution.clone(), Some(w)));
    }
    serde_json::from_str::<MixtureDistribution>(&text)
        .map(|d| (d, None))
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn check_witness(
    d: &MixtureDistribution,
    record: Option<&ExtremalWitness>,
    class: DistributionClass,
    interval: IntervalSpec,
    value: f64,
    source: &'static str,
    tol: f64,
) -> WitnessCheck {
    let tail = d.tail(interval.u(), interval.v());
    let (mean, variance, second_moment) = (d.mean(), d.variance(), d.second_moment());
    let moments_ok = match class {
        DistributionClass::ConcaveHalfLine => {
            (second_moment - 1.0).abs() <= tol
                && d.atoms().iter().all(|a| a.x >= 0.0)
                && d.segments().iter().all(|s| s.left >= 0.0)
        }
        _ => mean.abs() <= tol && (variance - 1.0).abs() <= tol,
    };
    let symmetric_ok = !matches!(
        class,
        DistributionClass::Symmetric | DistributionClass::SymmetricUnimodal
    ) || d.is_symmetric(tol);
    let unimodal_ok = match record.and_then(|w| w.mode) {
        Some(m) if !matches!(class, DistributionClass::All | DistributionClass::Symmetric) => {
            d.is_khintchine_unimodal(m, tol)
                && (class != DistributionClass::UnimodalModeEqMean || m.abs() <= tol)
        }
        _ => true,
    };
    WitnessCheck {
        source,
        tail,
        mean,
        variance,
        second_moment,
        feasible: moments_ok && symmetric_ok && unimodal_ok,
        attains_bound: (tail - value).abs() <= tol,
    }
}

fn default_oracle(class: DistributionClass, interval: IntervalSpec) -> OracleKind {
    match class {
        DistributionClass::Symmetric if !interval.is_one_sided() => OracleKind::Lp,
        DistributionClass::All | DistributionClass::Symmetric => OracleKind::Atoms,
        _ => OracleKind::Grid,
    }
}

pub fn verify_cmd(a: &VerifyArgs, cfg: &Config, out: &mut dyn Write) -> Result<()> {
    let interval = interval_of(&a.interval)?;
    let class = a.interval.class;
    let b = sharp_bound(class, interval, cfg)?;
    let tol = &cfg.tolerances;
    let (dist, record, source) = match &a.witness {
        Some(path) => {
            let (d, w) = load_witness(path)?;
            (d, w, "file")
        }
        None => {
            let w = extremal_for(class, interval)?;
            (w.distribution.clone(), Some(w), "construction")
        }
    };
    let witness = check_witness(
        &dist,
        record.as_ref(),
        class,
        interval,
        b.value,
        source,
        tol.feasibility,
    );
    let (u, v) = (interval.u(), interval.v());
    let mut grid = cfg.grid.clone();
    if let Some(s) = a.atom_steps {
        grid.atom_steps = s;
    }
    if let Some(s) = a.m_steps {
        grid.m_steps = s;
    }
    let kind = a.oracle.unwrap_or_else(|| default_oracle(class, interval));
    let (oracle, sound, approaches) = match kind {
        OracleKind::Lp => {
            if class != DistributionClass::Symmetric || interval.is_one_sided() {
                return Err(CliError::Class(
                    "the lp oracle covers two-sided symmetric queries only".into(),
                ));
            }
            let r = if v <= u {
                symmetric_lp_oracle(u, v)?
            } else {
                symmetric_lp_oracle(v, u)?
            };
            let sound = r.is_sound(tol.formula);
            let close = r.approaches(tol.formula);
            (OracleOutput::Grid(r), sound, Some(close))
        }
        OracleKind::Atoms => {
            let r = discrete_atoms_oracle(class, u, v, &grid)?;
            let (s, c) = (
                r.is_sound(tol.oracle_soundness),
                r.approaches(tol.oracle_approach),
            );
            (OracleOutput::Grid(r), s, Some(c))
        }
        OracleKind::Grid => {
            let r = khintchine_grid_oracle(class, u, v, &grid)?;
            let (s, c) = (
                r.is_sound(tol.oracle_soundness),
                r.approaches(tol.oracle_approach),
            );
            (OracleOutput::Grid(r), s, Some(c))
        }
        OracleKind::Mc => {
            let n = a.mc_n.unwrap_or(cfg.monte_carlo.n);
            let seed = a.seed.unwrap_or(cfg.monte_carlo.seed);
            let e: TailEstimate = monte_carlo_tail(&dist, u, v, n, seed)?;
            let ok = e.within_se(b.value, 4.0);
            let r = MonteCarloReport {
                oracle: "mc",
                estimate: e.estimate,
                standard_error: e.standard_error,
                n: e.n,
                seed,
                target: b.value,
                within_4se: ok,
            };
            (OracleOutput::MonteCarlo(r), ok, None)
        }
    };
    let report = VerifyOutput {
        class,
        u: finite(u),
        v,
        bound: b.value,
        regime: b.regime.clone(),
        witness,
        oracle,
        sound,
        approaches,
    };
    let p = cfg.precision;
    if a.json {
        writeln!(out, "{}", json(&report, p))?;
    } else {
        write_verify_text(&report, p, out)?;
    }
    let w = &report.witness;
    if !report.sound {
        return Err(CliError::Oracle(format!(
            "the {kind:?} oracle contradicts the bound {}",
            number(b.value, p)
        )));
    }
    if !w.feasible || !w.attains_bound {
        return Err(CliError::Oracle(format!(
            "witness check failed: feasible={}, tail {} vs bound {}",
            w.feasible,
            number(w.tail, p),
            number(b.value, p)
        )));
    }
    Ok(())
}

fn write_verify_text(r: &VerifyOutput, p: usize, out: &mut dyn Write) -> Result<()> {
    let u = r.u.map_or_else(|| "inf".to_string(), |u| number(u, p));
    writeln!(out, "class {} u={} v={}", r.class, u, number(r.v, p))?;
    writeln!(out, "bound:    {} ({})", number(r.bound, p), r.regime)?;
    let w = &r.witness;
    writeln!(
        out,
        "witness:  tail {} mean {} variance {} feasible {} attains {}",
        number(w.tail, p),
        number(w.mean, p),
        number(w.variance, p),
        w.feasible,
        w.attains_bound
    )?;
    match &r.oracle {
        OracleOutput::Grid(o) => writeln!(
            out,
            "oracle:   {} best {} gap {}",
            o.oracle,
            number(o.best_value, p),
            number(o.gap, p)
        )?,
        OracleOutput::MonteCarlo(m) => writeln!(
            out,
            "oracle:   mc estimate {} se {} n {} seed {}",
            number(m.estimate, p),
            number(m.standard_error, p),
            m.n,
            m.seed
        )?,
    }
    let approach = r.approaches.map_or("n/a".to_string(), |a| a.to_string());
    writeln!(out, "sound:    {}  approaches: {}", r.sound, approach)?;
    Ok(())
}

fn sweep_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if !(from > 0.0 && from.is_finite() && to.is_finite() && to >= from) || steps == 0 {
        return Err(CliError::Input(format!(
            "need 0 < v-from <= v-to and v-steps >= 1, got {from}..{to} in {steps} steps"
        )));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let h = (to - from) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                to
            } else {
                from + h * i as f64
            }
        })
        .collect())
}

pub fn sweep_cmd(a: &SweepArgs, cfg: &Config, out: &mut dyn Write) -> Result<()> {
    let vs = sweep_grid(a.v_from, a.v_to, a.v_steps)?;
    let p = cfg.precision;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["class", "u", "v", "value", "regime"])
        .map_err(io_of_csv)?;
    for v in vs {
        let u = match a.u_mode {
            UMode::Equal => v,
            UMode::Ratio(r) => r * v,
            UMode::Inf => f64::INFINITY,
        };
        let interval = IntervalSpec::new(u, v)?;
        let (value, regime) = match bound(a.class, interval) {
            Ok(b) => (number(b.value, p), b.regime),
            Err(Error::OutOfTheoremRange(_)) => (String::new(), "out-of-range".to_string()),
            Err(e) => return Err(e.into()),
        };
        let class = a.class.to_string();
        w.write_record([
            class.as_str(),
            &number(u, p),
            &number(v, p),
            &value,
            &regime,
        ])
        .map_err(io_of_csv)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    match a.out.as_deref() {
        Some(path) if path != Path::new("-") => fs::write(path, bytes)?,
        _ => out.write_all(&bytes)?,
    }
    Ok(())
}

fn io_of_csv(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

#[derive(Serialize)]
struct TableRow {
    class: DistributionClass,
    one_sided: Cell,
    absolute: Cell,
    interval: Cell,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Cell {
    Value(f64),
    Missing(&'static str),
}

fn cell(class: DistributionClass, interval: IntervalSpec) -> Result<Cell> {
    match bound(class, interval) {
        Ok(b) => Ok(Cell::Value(b.value)),
        Err(Error::OutOfTheoremRange(_)) => Ok(Cell::Missing("n/a(range)")),
        Err(Error::InvalidClassQuery(_)) => Ok(Cell::Missing("n/a")),
        Err(e) => Err(e.into()),
    }
}

pub fn table1_cmd(a: &Table1Args, cfg: &Config, out: &mut dyn Write) -> Result<()> {
    let u = a.u.unwrap_or(a.v);
    let one = IntervalSpec::one_sided(a.v)?;
    let abs = IntervalSpec::two_sided(a.v, a.v)?;
    let two = IntervalSpec::two_sided(u, a.v)?;
    let mut rows = Vec::new();
    for class in DistributionClass::ALL {
        rows.push(TableRow {
            class,
            one_sided: cell(class, one)?,
            absolute: cell(class, abs)?,
            interval: cell(class, two)?,
        });
    }
    let p = cfg.precision;
    if a.json {
        #[derive(Serialize)]
        struct Table<'a> {
            u: f64,
            v: f64,
            rows: &'a [TableRow],
        }
        writeln!(
            out,
            "{}",
            json(
                &Table {
                    u,
                    v: a.v,
                    rows: &rows
                },
                p
            )
        )?;
        return Ok(());
    }
    let show = |c: &Cell| match c {
        Cell::Value(x) => number(*x, p),
        Cell::Missing(s) => s.to_string(),
    };
    writeln!(out, "u = {}, v = {}", number(u, p), number(a.v, p))?;
    writeln!(
        out,
        "{:<14} {:<24} {:<24} P(Z<=-u or Z>=v)",
        "class", "P(Z>=v)", "P(|Z|>=v)"
    )?;
    for r in &rows {
        writeln!(
            out,
            "{:<14} {:<24} {:<24} {}",
            r.class.to_string(),
            show(&r.one_sided),
            show(&r.absolute),
            show(&r.interval)
        )?;
    }
    Ok(())
}

pub fn extremal_cmd(a: &ExtremalArgs, cfg: &Config, out: &mut dyn Write) -> Result<()> {
    let interval = interval_of(&a.interval)?;
    let class = a.interval.class;
    sharp_bound(class, interval, cfg)?;
    let w = extremal_for(class, interval)?;
    let p = cfg.precision;
    match a.emit {
        Emit::Json => writeln!(out, "{}", json(&w.distribution, p))?,
        Emit::Witness => writeln!(out, "{}", json(&w, p))?,
        Emit::Samples => {
            let seed = a.seed.unwrap_or(cfg.monte_carlo.seed);
            let mut buf = String::new();
            for z in w.distribution.sampler(seed).take(a.n) {
                buf.push_str(&number(z, p));
                buf.push('\n');
            }
            out.write_all(buf.as_bytes())?;
        }
        Emit::Summary => {
            let d = &w.distribution;
            writeln!(out, "class:    {class}")?;
            writeln!(out, "u:        {}", number(interval.u(), p))?;
            writeln!(out, "v:        {}", number(interval.v(), p))?;
            writeln!(out, "regime:   {}", w.regime)?;
            writeln!(out, "bound:    {}", number(w.claimed_value, p))?;
            writeln!(out, "attained: {}", number(w.attained_value(), p))?;
            if let Some(m) = w.mode {
                writeln!(out, "mode:     {}", number(m, p))?;
            }
            writeln!(out, "mean:     {}", number(d.mean(), p))?;
            writeln!(out, "variance: {}", number(d.variance(), p))?;
            for at in d.atoms() {
                writeln!(
                    out,
                    "atom      x={} mass={}",
                    number(at.x, p),
                    number(at.mass, p)
                )?;
            }
            for s in d.segments() {
                writeln!(
                    out,
                    "uniform   [{}, {}] mass={}",
                    number(s.left, p),
                    number(s.right, p),
                    number(s.mass, p)
                )?;
            }
        }
    }
    Ok(())
}
