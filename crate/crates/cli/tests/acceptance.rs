//! End-to-end acceptance checks, one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tailbound::error::CliError;
use tailbound_core::oracles::{
    discrete_atoms_oracle, khintchine_grid_oracle, monte_carlo_tail, reciprocal_oracle,
    symmetric_lp_oracle, GridSpec, OracleReport,
};
use tailbound_core::solvers::{cubic_relative_residual, mode_mean_relative_residual};
use tailbound_core::{
    bound, bound_vp, cubic_positive_root, extremal_for, gamma_for, mode_mean_x, DistributionClass,
    Error, IntervalSpec, VPInput,
};

use DistributionClass::*;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

const INF: f64 = f64::INFINITY;

fn s3() -> f64 {
    3f64.sqrt()
}

fn value(class: DistributionClass, u: f64, v: f64) -> Result<f64, String> {
    let i = IntervalSpec::new(u, v).map_err(|e| e.to_string())?;
    bound(class, i)
        .map(|b| b.value)
        .map_err(|e| format!("{class} u={u} v={v}: {e}"))
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn auc() -> Check {
    let b = value(Unimodal, INF, 2.0 * s3())?;
    ensure((b - 4.0 / 117.0).abs() <= 1e-12, || {
        format!("bound {b} vs 4/117")
    })?;
    let lower = 1.0 - b;
    ensure(
        (lower - 113.0 / 117.0).abs() <= 1e-12 && (lower - 0.96581).abs() < 5e-6,
        || format!("1 - bound = {lower}"),
    )?;
    Ok(format!("bound {b:.15}, 1 - bound {lower:.5}"))
}

fn sharpness_grid() -> Check {
    let mut g: Vec<f64> = (1..=80).map(|k| 0.06 * k as f64).collect();
    g.extend_from_slice(&[
        s3(),
        2.0 / s3(),
        (5.0f64 / 3.0).sqrt(),
        2.0 * s3(),
        3.0 * s3(),
        7.5,
        10.0,
    ]);
    let mut intervals: Vec<(f64, f64)> = g.iter().map(|&v| (INF, v)).collect();
    for &u in g.iter().step_by(3) {
        for &v in g.iter().step_by(2) {
            intervals.push((u, v));
        }
    }
    let tol = 1e-9;
    let mut regimes = BTreeSet::new();
    let mut checked = 0;
    for class in DistributionClass::ALL {
        for &(u, v) in &intervals {
            let i = IntervalSpec::new(u, v).unwrap();
            let b = match bound(class, i) {
                Ok(b) => b,
                Err(Error::OutOfTheoremRange(_)) | Err(Error::InvalidClassQuery(_)) => continue,
                Err(e) => return Err(format!("{class} u={u} v={v}: {e}")),
            };
            let w = extremal_for(class, i).map_err(|e| format!("{class} u={u} v={v}: {e}"))?;
            let d = &w.distribution;
            let ctx = || format!("{class} u={u} v={v} ({})", b.regime);
            let tail = d.tail(u, v);
            ensure((tail - b.value).abs() <= tol, || {
                format!("{}: tail {tail} vs {}", ctx(), b.value)
            })?;
            if class == ConcaveHalfLine {
                ensure((d.second_moment() - 1.0).abs() <= tol, || {
                    format!("{}: E Y^2", ctx())
                })?;
            } else {
                ensure(d.mean().abs() <= tol, || {
                    format!("{}: mean {}", ctx(), d.mean())
                })?;
                ensure((d.variance() - 1.0).abs() <= tol, || {
                    format!("{}: var {}", ctx(), d.variance())
                })?;
            }
            regimes.insert(b.regime.clone());
            checked += 1;
        }
    }
    let expected = [
        "cantelli",
        "all.trivial",
        "all.mid",
        "all.cap",
        "sym.one_sided",
        "sym.inner",
        "sym.wide",
        "sym.split",
        "sym.right",
        "concave.uniform",
        "concave.inflated",
        "gauss.uniform",
        "gauss.inflated",
        "unimodal.mode_at_v",
        "unimodal.cap",
        "unimodal.mid",
        "unimodal.vp",
        "mode_mean.one_sided",
        "mode_mean.two_sided",
        "sym_unimodal.uniform",
        "sym_unimodal.inflated",
        "sym_unimodal.joint",
        "sym_unimodal.right",
    ];
    let missing: Vec<_> = expected.iter().filter(|r| !regimes.contains(**r)).collect();
    ensure(missing.is_empty(), || {
        format!("regimes not exercised: {missing:?}")
    })?;
    ensure(checked >= 200, || format!("only {checked} points"))?;
    Ok(format!("{checked} points, {} regimes", regimes.len()))
}

/// Each identity compares the two adjacent regime formulas at the boundary,
/// and both against the dispatched value.
fn breakpoints() -> Check {
    let mut n = 0;
    let mut check = |name: &str, left: f64, right: f64, dispatched: f64| -> Result<(), String> {
        n += 1;
        ensure(
            rel_close(left, right, 1e-12) && rel_close(left, dispatched, 1e-12),
            || format!("{name}: {left} | {right} | dispatched {dispatched}"),
        )
    };
    let mid = |u: f64, v: f64| (4.0 + (u - v) * (u - v)) / ((u + v) * (u + v));
    for v in [0.3, 0.7, 0.95] {
        let u = 1.0 / v;
        check("uv=1", 1.0, mid(u, v), value(All, u, v)?)?;
    }
    for v in [0.5, 1.0, 1.5, 3.0] {
        let u = v + 2.0 / v;
        check(
            "all u=v+2/v",
            mid(u, v),
            1.0 / (1.0 + v * v),
            value(All, u, v)?,
        )?;
    }
    for v in [s3(), 2.0, 4.0] {
        let u = v + 2.0 / v;
        let cap = 4.0 / (9.0 * (1.0 + v * v));
        check(
            "unimodal u=v+2/v",
            4.0 / 9.0 * mid(u, v),
            cap,
            value(Unimodal, u, v)?,
        )?;
    }
    let g = 2.0 / s3();
    let gauss = 4.0 / (9.0 * g * g);
    check(
        "gauss v=2/sqrt3",
        1.0 - g / s3(),
        gauss,
        value(SymmetricUnimodal, g, g)?,
    )?;
    check(
        "concave v=2/sqrt3",
        1.0 - g / s3(),
        gauss,
        value(ConcaveHalfLine, INF, g)?,
    )?;
    check(
        "sym-unimodal one-sided v=2/sqrt3",
        0.5 * (1.0 - g / s3()),
        2.0 / (9.0 * g * g),
        value(SymmetricUnimodal, INF, g)?,
    )?;
    let w = (5.0f64 / 3.0).sqrt();
    check(
        "unimodal v=sqrt(5/3)",
        (3.0 - w * w) / (3.0 * (1.0 + w * w)),
        4.0 / (9.0 * (1.0 + w * w)),
        value(Unimodal, INF, w)?,
    )?;
    for m2 in [0.5f64, 1.0, 4.0] {
        let a = m2.sqrt();
        let vp = |w: f64| {
            bound_vp(VPInput { w, m2 })
                .map(|b| b.value)
                .map_err(|e| e.to_string())
        };
        check(
            "vp w^2=m2",
            1.0,
            4.0 * m2 / (3.0 * a * a) - 1.0 / 3.0,
            vp(a)?,
        )?;
        let b = (8.0 * m2 / 3.0).sqrt();
        check(
            "vp 3w^2=8m2",
            4.0 * m2 / (3.0 * b * b) - 1.0 / 3.0,
            4.0 * m2 / (9.0 * b * b),
            vp(b)?,
        )?;
    }
    let split = |u: f64, v: f64| 0.5 + (1.0 - v * v) / (2.0 * (u * u - v * v));
    check("sym u=1", 1.0, 1.0, value(Symmetric, 1.0, 0.6)?)?;
    for v in [0.4, 0.8, 1.0] {
        let u = 2f64.sqrt() * v;
        if u > 1.0 {
            check(
                "sym u=sqrt2 v (v<=1)",
                1.0 / (u * u),
                split(u, v),
                value(Symmetric, u, v)?,
            )?;
        }
    }
    for v in [1.5, 3.0] {
        let u = 2f64.sqrt() * v;
        check(
            "sym u=sqrt2 v (v>1)",
            1.0 / (u * u),
            1.0 / (2.0 * v * v),
            value(Symmetric, u, v)?,
        )?;
    }
    for u in [1.8, 3.0] {
        check("sym v=1", split(u, 1.0), 0.5, value(Symmetric, u, 1.0)?)?;
    }
    let r = 2.0 * 2f64.sqrt() - 1.0;
    for v in [s3(), 2.5, 5.0] {
        let u = r * v;
        let joint = 16.0 / (9.0 * (u + v) * (u + v));
        check(
            "sym-unimodal u=(2sqrt2-1)v",
            joint,
            2.0 / (9.0 * v * v),
            value(SymmetricUnimodal, u, v)?,
        )?;
    }
    for v in [s3(), 2.0, 3.0] {
        check(
            "mode-mean u=v",
            4.0 / (9.0 * v * v),
            4.0 / (9.0 * v * v),
            value(UnimodalModeEqMean, v, v)?,
        )?;
    }
    Ok(format!("{n} identities"))
}

fn roots() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let r = 10f64.powf(-6.0 + 12.0 * rng.random::<f64>());
        let z = cubic_positive_root(r).map_err(|e| e.to_string())?.z;
        let res = cubic_relative_residual(r, z);
        worst = worst.max(res);
        ensure(res <= 1e-10, || format!("r={r}: residual {res}"))?;
    }
    let z1 = cubic_positive_root(1.0).map_err(|e| e.to_string())?.z;
    ensure((z1 - 1.0).abs() <= 1e-12, || format!("z(1) = {z1}"))?;
    for u in [0.5, s3(), 2.0, 7.0] {
        let g = gamma_for(u, u).map_err(|e| e.to_string())?;
        ensure((g - 1.0).abs() <= 1e-12, || format!("gamma({u},{u}) = {g}"))?;
    }
    let mut worst_x: f64 = 0.0;
    for k in 0..=60 {
        let v = 10f64.powf(-1.0 + 3.0 * k as f64 / 60.0);
        let x = mode_mean_x(v).map_err(|e| e.to_string())?.x;
        let res = mode_mean_relative_residual(v, x);
        worst_x = worst_x.max(res);
        ensure(res <= 1e-9, || format!("v={v}: residual {res}"))?;
    }
    Ok(format!(
        "worst cubic residual {worst:.1e}, worst mode-mean residual {worst_x:.1e}"
    ))
}

fn designated_points() -> Vec<(DistributionClass, f64, f64, f64)> {
    vec![
        (All, INF, 1.0, 0.5),
        (All, 2.0, 1.0, 5.0 / 9.0),
        (Symmetric, INF, 2.0, 0.125),
        (Symmetric, 3.0, 2.0, 0.125),
        (Unimodal, INF, 2.0, 4.0 / 45.0),
        (Unimodal, 2.4, 2.0, 4.0 / 9.0 * 4.16 / 19.36),
        (UnimodalModeEqMean, INF, s3() / 2.0, 0.25),
        (UnimodalModeEqMean, 2.5, 2.0, 0.092_291_179_324_978_6),
        (SymmetricUnimodal, INF, 2.0, 1.0 / 18.0),
        (SymmetricUnimodal, 3.0 * s3(), s3(), 2.0 / 27.0),
        (ConcaveHalfLine, INF, s3(), 4.0 / 27.0),
        (ConcaveHalfLine, INF, 0.5, 1.0 - 0.5 / s3()),
    ]
}

fn grid_oracle(
    class: DistributionClass,
    u: f64,
    v: f64,
    grid: &GridSpec,
) -> Result<OracleReport, String> {
    match class {
        All | Symmetric => discrete_atoms_oracle(class, u, v, grid),
        _ => khintchine_grid_oracle(class, u, v, grid),
    }
    .map_err(|e| format!("{class} u={u} v={v}: {e}"))
}

fn oracles() -> Check {
    for i in 1..=50 {
        for j in 1..=i {
            let (u, v) = (0.1 * i as f64, 0.1 * j as f64);
            let lp = symmetric_lp_oracle(u, v)
                .map_err(|e| e.to_string())?
                .best_value;
            let b = value(Symmetric, u, v)?;
            ensure((lp - b).abs() <= 1e-12, || {
                format!("lp u={u} v={v}: {lp} vs {b}")
            })?;
        }
    }
    let grid = GridSpec::default();
    let mut worst_gap: f64 = 0.0;
    let mut worst_excess = f64::NEG_INFINITY;
    for (class, u, v, expected) in designated_points() {
        let r = grid_oracle(class, u, v, &grid)?;
        ensure((r.analytic_bound - expected).abs() <= 1e-12, || {
            format!(
                "{class} u={u} v={v}: analytic {} vs {expected}",
                r.analytic_bound
            )
        })?;
        ensure(r.is_sound(1e-6), || {
            format!("{class} u={u} v={v}: exceeds bound {r:?}")
        })?;
        ensure(r.approaches(1e-3), || {
            format!("{class} u={u} v={v}: gap {}", r.gap)
        })?;
        worst_gap = worst_gap.max(r.gap);
        worst_excess = worst_excess.max(-r.gap);
    }
    let coarse = GridSpec {
        atom_steps: 41,
        m_steps: 41,
        refine_rounds: 6,
        ..GridSpec::default()
    };
    let extra = [
        (INF, 0.5),
        (INF, 1.3),
        (INF, 3.0),
        (2.0, 2.0),
        (3.0, 2.0),
        (2.2, 1.9),
        (4.0, 2.5),
    ];
    let mut extra_checked = 0;
    for class in DistributionClass::ALL {
        for &(u, v) in &extra {
            if value(class, u, v).is_err() {
                continue;
            }
            let r = grid_oracle(class, u, v, &coarse)?;
            ensure(r.is_sound(1e-6), || {
                format!("coarse {class} u={u} v={v}: {r:?}")
            })?;
            worst_excess = worst_excess.max(-r.gap);
            extra_checked += 1;
        }
    }
    Ok(format!(
        "lp 1275 points exact; 12 designated points, worst gap {worst_gap:.1e}; \
         {extra_checked} coarse points; worst excess {worst_excess:.1e}"
    ))
}

fn reciprocal() -> Check {
    let r = reciprocal_oracle(2.0, 1.0, &GridSpec::default()).map_err(|e| e.to_string())?;
    ensure((r.best_value - 2.0 / 3.0).abs() <= 1e-9, || {
        format!("mu=2: {}", r.best_value)
    })?;
    let p = &r.witness_params;
    ensure(
        p.len() == 4 && (p[0] - 1.0).abs() < 1e-12 && (p[2] - 3.0).abs() < 1e-12,
        || format!("witness {p:?}"),
    )?;
    let mut prev = 0.0;
    let mut last = 0.0;
    for steps in [51, 101, 201, 401, 801] {
        let g = GridSpec {
            atom_steps: steps,
            ..GridSpec::default()
        };
        let b = reciprocal_oracle(1.0, 1.0, &g)
            .map_err(|e| e.to_string())?
            .best_value;
        ensure(b < 1.0, || format!("mu=1, {steps} steps: {b} reaches 1"))?;
        ensure(b > prev, || {
            format!("mu=1, {steps} steps: {b} does not increase on {prev}")
        })?;
        prev = b;
        last = b;
    }
    Ok(format!(
        "mu=2 best {:.12}; mu=1 best {last:.6} at 801 steps",
        r.best_value
    ))
}

fn monte_carlo() -> Check {
    let cases = [
        (All, 2.0, 1.0),
        (Symmetric, 3.0, 2.0),
        (ConcaveHalfLine, INF, 1.5),
        (Unimodal, 2.4, 2.0),
        (UnimodalModeEqMean, 2.5, 2.0),
        (SymmetricUnimodal, 3.0 * s3(), s3()),
    ];
    let mut worst: f64 = 0.0;
    for (k, (class, u, v)) in cases.into_iter().enumerate() {
        let i = IntervalSpec::new(u, v).unwrap();
        let w = extremal_for(class, i).map_err(|e| e.to_string())?;
        let e = monte_carlo_tail(&w.distribution, u, v, 1_000_000, 1000 + k as u64)
            .map_err(|e| e.to_string())?;
        let z = (e.estimate - w.claimed_value).abs() / e.standard_error;
        worst = worst.max(z);
        ensure(e.within_se(w.claimed_value, 4.0), || {
            format!(
                "{class} u={u} v={v}: {} vs {} (se {})",
                e.estimate, w.claimed_value, e.standard_error
            )
        })?;
    }
    Ok(format!("6 witnesses, worst |z| = {worst:.2}"))
}

fn ordering() -> Check {
    let mut n = 0;
    for i in 0..=40 {
        let v = s3() + 0.15 * i as f64;
        for j in 0..=20 {
            let u = v + (2.0 / v) * j as f64 / 20.0;
            let get = |c| value(c, u, v);
            let (all, sym, uni, mm, su) = (
                get(All)?,
                get(Symmetric)?,
                get(Unimodal)?,
                get(UnimodalModeEqMean)?,
                get(SymmetricUnimodal)?,
            );
            let e = 1e-12;
            ensure(
                su <= uni + e && uni <= all + e && su <= sym + e && sym <= all + e && mm <= uni + e,
                || format!("u={u} v={v}: all {all} sym {sym} uni {uni} mm {mm} su {su}"),
            )?;
            n += 1;
        }
    }
    Ok(format!("{n} points"))
}

const BIN: &str = env!("CARGO_BIN_EXE_tailbound");

fn cli(args: &[&str]) -> Result<(i32, String, String), String> {
    let o = Command::new(BIN)
        .args(args)
        .env_remove("TAILBOUND_CONFIG")
        .output()
        .map_err(|e| e.to_string())?;
    Ok((
        o.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&o.stdout).into_owned(),
        String::from_utf8_lossy(&o.stderr).into_owned(),
    ))
}

fn cli_contract() -> Check {
    let golden_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let goldens: [(&str, &[&str]); 4] = [
        (
            "bound_all_one_sided.json",
            &[
                "bound",
                "--class",
                "all",
                "--one-sided",
                "--v",
                "1",
                "--json",
            ],
        ),
        (
            "extremal_all.json",
            &["extremal", "--class", "all", "--v", "2", "--emit", "json"],
        ),
        (
            "sweep_all_inf.csv",
            &[
                "sweep",
                "--class",
                "all",
                "--v-from",
                "1",
                "--v-to",
                "3",
                "--v-steps",
                "3",
                "--u-mode",
                "inf",
            ],
        ),
        (
            "verify_lp.json",
            &[
                "verify",
                "--class",
                "symmetric",
                "--u",
                "3",
                "--v",
                "2",
                "--oracle",
                "lp",
                "--json",
            ],
        ),
    ];
    for (name, args) in goldens {
        let want = fs::read_to_string(golden_dir.join(name)).map_err(|e| format!("{name}: {e}"))?;
        let (c, out, err) = cli(args)?;
        ensure(c == 0 && out == want, || {
            format!("golden {name}: exit {c}, {err}")
        })?;
    }
    let codes: [(&[&str], i32); 7] = [
        (&["bound", "--class", "all", "--one-sided", "--v", "1"], 0),
        (&["bound", "--class", "all", "--v", "-1"], 2),
        (
            &["bound", "--class", "mode-mean", "--u", "3", "--v", "1"],
            3,
        ),
        (&["bound", "--class", "concave", "--u", "4", "--v", "2"], 4),
        (
            &[
                "capability",
                "--lsl",
                "0",
                "--usl",
                "1",
                "--mean",
                "2",
                "--sd",
                "1",
            ],
            2,
        ),
        (
            &[
                "sweep",
                "--class",
                "all",
                "--v-from",
                "3",
                "--v-to",
                "1",
                "--v-steps",
                "2",
            ],
            2,
        ),
        (
            &[
                "verify", "--class", "unimodal", "--v", "2", "--oracle", "lp",
            ],
            4,
        ),
    ];
    for (args, want) in codes {
        let (c, _, err) = cli(args)?;
        ensure(c == want, || {
            format!("{args:?}: exit {c}, want {want} ({err})")
        })?;
    }
    let (_, _, err) = cli(&["bound", "--class", "mode-mean", "--u", "3", "--v", "1"])?;
    ensure(err.contains("not sharp for requested class"), || {
        format!("range message: {err}")
    })?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let csv = dir.path().join("bad.csv");
    fs::write(&csv, "x\n1\nfoo\n").map_err(|e| e.to_string())?;
    let (c, _, err) = cli(&[
        "capability",
        "--lsl",
        "0",
        "--usl",
        "3",
        "--data",
        csv.to_str().unwrap(),
        "--column",
        "x",
    ])?;
    ensure(c == 5 && err.contains("line 3"), || {
        format!("malformed csv: exit {c}, {err}")
    })?;
    let w = dir.path().join("w.json");
    fs::write(
        &w,
        r#"{"atoms":[{"x":2,"mass":0.3},{"x":-0.5,"mass":0.7}],"segments":[]}"#,
    )
    .map_err(|e| e.to_string())?;
    let (c, _, _) = cli(&[
        "verify",
        "--class",
        "all",
        "--v",
        "2",
        "--witness",
        w.to_str().unwrap(),
    ])?;
    ensure(c == 6, || format!("tampered witness: exit {c}"))?;
    let no_witness = CliError::from(Error::NoWitness(String::new())).exit_code();
    ensure(no_witness == 7, || {
        format!("NoWitness maps to {no_witness}")
    })?;

    let s = format!("{}", 2.0 * s3());
    let lsl = format!("-{s}");
    let (c, out, err) = cli(&[
        "capability",
        "--lsl",
        &lsl,
        "--usl",
        &s,
        "--mean",
        "0",
        "--sd",
        "1",
        "--json",
    ])?;
    ensure(c == 0, || err.clone())?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let rows = v["rows"].as_array().ok_or("rows missing")?;
    let uni = rows
        .iter()
        .find(|r| r["class"] == "unimodal")
        .ok_or("no unimodal row")?;
    let b = uni["bound"].as_f64().ok_or("no unimodal bound")?;
    ensure((b - 1.0 / 27.0).abs() <= 1e-12, || {
        format!("capability unimodal {b}")
    })?;
    Ok(format!(
        "4 goldens, exit codes 0/2/3/4/5/6/7, capability unimodal {b:.15} ppm {}",
        uni["ppm"]
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AUC check", auc),
        ("sharpness grid", sharpness_grid),
        ("breakpoint continuity", breakpoints),
        ("root residuals", roots),
        ("oracle soundness and approach", oracles),
        ("reciprocal moment bound", reciprocal),
        ("Monte Carlo", monte_carlo),
        ("class ordering", ordering),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
