//! Implementations of the subcommands: resolve flags against the optional
//! config file, run the library, write deterministic output files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;

use pacs_wigner::channel::evolve_pacs;
use pacs_wigner::gate::{overlap_table, GateConfig};
use pacs_wigner::negativity::{
    pnw_curve_on, threshold_analytic, threshold_numeric, ThresholdResult,
};
use pacs_wigner::phase_space::fmt_g17;
use pacs_wigner::states::{wigner_spacs_evolved, ChannelParams, PacsSpec};
use pacs_wigner::{verify as libverify, GridSpec, WignerField};

use crate::args::{GridArg, OutputFormat, SweepRange};
use crate::config::Config;
use crate::format::{json_array, JsonObject};
use crate::{GateArgs, PnwArgs, ThresholdArgs, VerifyArgs, WignerArgs};

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.with_context(|| {
        format!(
            "missing --{} (or config key {})",
            flag,
            flag.replace('-', "_")
        )
    })
}

fn resolve_alpha(cfg: &Config, alpha: Option<f64>, alpha_im: Option<f64>) -> Result<Complex64> {
    let re = require(cfg.resolve(alpha, "alpha")?, "alpha")?;
    let im = cfg.resolve(alpha_im, "alpha_im")?.unwrap_or(0.0);
    Ok(Complex64::new(re, im))
}

fn resolve_grid(cfg: &Config, grid: Option<GridArg>) -> Result<GridSpec> {
    Ok(cfg
        .resolve(grid, "grid")?
        .map(|g| g.0)
        .unwrap_or_else(GridSpec::default_window))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn evolved_field(spec: &PacsSpec, ch: &ChannelParams, grid: &GridSpec) -> Result<WignerField> {
    let field = if spec.m == 1 {
        wigner_spacs_evolved(spec.alpha, ch, *grid)?
    } else {
        evolve_pacs(spec, ch, grid)?
    };
    Ok(field)
}

pub fn wigner(a: WignerArgs, cfg: &Config) -> Result<bool> {
    let alpha = resolve_alpha(cfg, a.alpha, a.alpha_im)?;
    let m = require(cfg.resolve(a.m, "m")?, "m")?;
    let n = cfg.resolve(a.n, "n")?.unwrap_or(0.0);
    let gamma_t = cfg.resolve(a.gamma_t, "gamma_t")?.unwrap_or(0.0);
    let grid = resolve_grid(cfg, a.grid)?;
    let format = cfg
        .resolve(a.format, "format")?
        .unwrap_or(OutputFormat::Csv);
    let out = cfg.resolve(a.out, "out")?.unwrap_or_else(|| {
        PathBuf::from(if format == OutputFormat::Json {
            "wigner.json"
        } else {
            "wigner.csv"
        })
    });

    let spec = PacsSpec::new(alpha, m)?;
    let ch = ChannelParams::new(gamma_t, n)?;
    let field = evolved_field(&spec, &ch, &grid)?;

    let mut w = create(&out)?;
    match format {
        OutputFormat::Csv => field.write_csv(&mut w)?,
        OutputFormat::Json => write_field_json(&field, &mut w)?,
    }
    w.flush()?;

    let (q_min, p_min, v_min) = field.min_location()?;
    println!(
        "wrote {} ({}x{} grid, min W = {} at ({}, {}))",
        out.display(),
        grid.nq,
        grid.np,
        fmt_g17(v_min),
        fmt_g17(q_min),
        fmt_g17(p_min)
    );
    Ok(true)
}

fn write_field_json<W: Write>(field: &WignerField, w: &mut W) -> Result<()> {
    let spec = field.spec();
    writeln!(w, "{{")?;
    writeln!(
        w,
        "  \"grid\":{},",
        JsonObject::new()
            .num("q_min", spec.q_min)
            .num("q_max", spec.q_max)
            .num("p_min", spec.p_min)
            .num("p_max", spec.p_max)
            .int("nq", spec.nq as i64)
            .int("np", spec.np as i64)
            .build()
    )?;
    writeln!(w, "  \"w\":[")?;
    for i in 0..spec.nq {
        let row: Vec<String> = (0..spec.np).map(|j| fmt_g17(field.at(i, j))).collect();
        writeln!(
            w,
            "    [{}]{}",
            row.join(","),
            if i + 1 < spec.nq { "," } else { "" }
        )?;
    }
    writeln!(w, "  ]")?;
    writeln!(w, "}}")?;
    Ok(())
}

pub fn pnw(a: PnwArgs, cfg: &Config) -> Result<bool> {
    let alpha = resolve_alpha(cfg, a.alpha, a.alpha_im)?;
    let m = require(cfg.resolve(a.m, "m")?, "m")?;
    let n_range = require(cfg.resolve(a.n, "n")?, "n")?;
    let t_range = require(cfg.resolve(a.t, "t")?, "t")?;
    let grid = resolve_grid(cfg, a.grid)?;
    let format = cfg
        .resolve(a.format, "format")?
        .unwrap_or(OutputFormat::Csv);
    let out = cfg.resolve(a.out, "out")?.unwrap_or_else(|| {
        PathBuf::from(if format == OutputFormat::Json {
            "pnw.json"
        } else {
            "pnw.csv"
        })
    });

    let spec = PacsSpec::new(alpha, m)?;
    let times = t_range.values();
    let n_values = n_range.values();
    let multi = n_values.len() > 1;

    for &n in &n_values {
        let curve = pnw_curve_on(&spec, n, &times, &grid)?;
        let path = if multi {
            suffixed(&out, &format!("_n{:.4}", n))
        } else {
            out.clone()
        };
        let mut w = create(&path)?;
        match format {
            OutputFormat::Csv => {
                writeln!(w, "gamma_t,p_nw")?;
                for (t, p) in &curve {
                    writeln!(w, "{},{}", fmt_g17(*t), fmt_g17(*p))?;
                }
            }
            OutputFormat::Json => {
                let rows: Vec<String> = curve
                    .iter()
                    .map(|(t, p)| JsonObject::new().num("gamma_t", *t).num("p_nw", *p).build())
                    .collect();
                w.write_all(json_array(&rows).as_bytes())?;
            }
        }
        w.flush()?;
        println!("wrote {} ({} points)", path.display(), curve.len());

        let sidecar = path.with_extension("meta.json");
        let mut obj = JsonObject::new()
            .num("alpha_re", alpha.re)
            .num("alpha_im", alpha.im)
            .int("m", m as i64)
            .num("n", n);
        obj = if m >= 1 {
            obj.num("threshold_analytic", threshold_analytic(n)?.gamma_t_c)
        } else {
            obj.raw("threshold_analytic", "null")
        };
        let mut w = create(&sidecar)?;
        writeln!(w, "{}", obj.build())?;
        w.flush()?;
        println!("wrote {}", sidecar.display());
    }
    Ok(true)
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{}{}.{}", stem, suffix, ext))
}

fn threshold_json(result: &ThresholdResult) -> String {
    JsonObject::new()
        .num("gamma_t_c", result.gamma_t_c)
        .string("method", result.method.as_str())
        .num("bisection_width", result.bisection_width)
        .build()
}

pub fn threshold(a: ThresholdArgs, cfg: &Config) -> Result<bool> {
    let alpha = resolve_alpha(cfg, a.alpha, a.alpha_im)?;
    let m = require(cfg.resolve(a.m, "m")?, "m")?;
    let tol = cfg
        .resolve(a.tol, "tol")?
        .unwrap_or(pacs_wigner::negativity::THRESHOLD_TOL);
    let spec = PacsSpec::new(alpha, m)?;
    let sweep = cfg.resolve(a.sweep_n, "sweep_n")?;

    if let Some(sweep) = sweep {
        return threshold_sweep(&spec, sweep, tol, a.out, a.format, cfg);
    }

    let n = require(cfg.resolve(a.n, "n")?, "n")?;
    let out = cfg
        .resolve(a.out, "out")?
        .unwrap_or_else(|| PathBuf::from("threshold.json"));
    let numeric = threshold_numeric(&spec, n, tol)?;
    let analytic = threshold_analytic(n)?;
    let diff = (numeric.gamma_t_c - analytic.gamma_t_c).abs();

    let obj = JsonObject::new()
        .num("alpha_re", alpha.re)
        .num("alpha_im", alpha.im)
        .int("m", m as i64)
        .num("n", n)
        .num("gamma_t_c", numeric.gamma_t_c)
        .string("method", numeric.method.as_str())
        .num("bisection_width", numeric.bisection_width)
        .raw("analytic", &threshold_json(&analytic))
        .num("abs_diff", diff)
        .build();
    let mut w = create(&out)?;
    writeln!(w, "{}", obj)?;
    w.flush()?;
    println!(
        "wrote {} (numeric = {}, analytic = {}, |diff| = {})",
        out.display(),
        fmt_g17(numeric.gamma_t_c),
        fmt_g17(analytic.gamma_t_c),
        fmt_g17(diff)
    );
    Ok(true)
}

fn threshold_sweep(
    spec: &PacsSpec,
    sweep: SweepRange,
    tol: f64,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    cfg: &Config,
) -> Result<bool> {
    let format = cfg.resolve(format, "format")?.unwrap_or(OutputFormat::Csv);
    let out = cfg.resolve(out, "out")?.unwrap_or_else(|| {
        PathBuf::from(if format == OutputFormat::Json {
            "threshold_sweep.json"
        } else {
            "threshold_sweep.csv"
        })
    });
    let mut rows = Vec::new();
    for n in sweep.values() {
        let numeric = threshold_numeric(spec, n, tol)?;
        let analytic = threshold_analytic(n)?;
        rows.push((n, numeric.gamma_t_c, analytic.gamma_t_c));
    }
    let mut w = create(&out)?;
    match format {
        OutputFormat::Csv => {
            writeln!(w, "n,gamma_t_c_numeric,gamma_t_c_analytic")?;
            for (n, num, ana) in &rows {
                writeln!(w, "{},{},{}", fmt_g17(*n), fmt_g17(*num), fmt_g17(*ana))?;
            }
        }
        OutputFormat::Json => {
            let items: Vec<String> = rows
                .iter()
                .map(|(n, num, ana)| {
                    JsonObject::new()
                        .num("n", *n)
                        .num("gamma_t_c_numeric", *num)
                        .num("gamma_t_c_analytic", *ana)
                        .build()
                })
                .collect();
            w.write_all(json_array(&items).as_bytes())?;
        }
    }
    w.flush()?;
    println!("wrote {} ({} rows)", out.display(), rows.len());
    Ok(true)
}

pub fn gate(a: GateArgs, cfg: &Config) -> Result<bool> {
    let alpha = resolve_alpha(cfg, a.alpha, a.alpha_im)?;
    let phi = require(cfg.resolve(a.phi, "phi")?, "phi")?;
    let out = cfg
        .resolve(a.out, "out")?
        .unwrap_or_else(|| PathBuf::from("gate.json"));
    let gate_cfg = match cfg.resolve(a.cutoff, "cutoff")? {
        Some(cutoff) => GateConfig::with_cutoff(alpha, phi, cutoff)?,
        None => GateConfig::new(alpha, phi)?,
    };
    let table = overlap_table(&gate_cfg)?;
    let bits_label = |b: (bool, bool)| format!("{}{}", b.0 as u8, b.1 as u8);
    let items: Vec<String> = table
        .iter()
        .map(|rec| {
            JsonObject::new()
                .num("alpha_re", alpha.re)
                .num("alpha_im", alpha.im)
                .num("phi", phi)
                .string("pair", &bits_label(rec.bits))
                .num("analytic_re", rec.analytic.re)
                .num("analytic_im", rec.analytic.im)
                .num("numeric_re", rec.numeric.re)
                .num("numeric_im", rec.numeric.im)
                .num("approx_re", rec.approx.re)
                .num("approx_im", rec.approx.im)
                .boolean("regime_ok", rec.regime_ok)
                .build()
        })
        .collect();
    let mut w = create(&out)?;
    w.write_all(json_array(&items).as_bytes())?;
    w.flush()?;

    let worst = table
        .iter()
        .map(|rec| (rec.analytic - rec.numeric).norm())
        .fold(0.0f64, f64::max);
    println!(
        "wrote {} (4 pairs, max |analytic - numeric| = {}, cutoff = {})",
        out.display(),
        fmt_g17(worst),
        gate_cfg.cutoff
    );
    if worst > 1e-8 {
        bail!(
            "analytic and numeric overlaps disagree beyond 1e-8 (max {})",
            worst
        );
    }
    Ok(true)
}

pub fn verify(a: VerifyArgs) -> Result<bool> {
    let reports = libverify::run_all();
    for report in &reports {
        println!("{}", report.line());
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("{}/{} criteria passed", passed, reports.len());
    if let Some(out) = a.out {
        let items: Vec<String> = reports
            .iter()
            .map(|r| {
                JsonObject::new()
                    .int("id", r.id as i64)
                    .string("name", r.name)
                    .boolean("passed", r.passed)
                    .string("details", &r.details)
                    .build()
            })
            .collect();
        let mut w = create(&out)?;
        w.write_all(json_array(&items).as_bytes())?;
        w.flush()?;
        println!("wrote {}", out.display());
    }
    Ok(passed == reports.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffix_insertion() {
        assert_eq!(
            suffixed(Path::new("pnw.csv"), "_n0.1000"),
            PathBuf::from("pnw_n0.1000.csv")
        );
        assert_eq!(
            suffixed(Path::new("out/curve.json"), "_n0.5000"),
            PathBuf::from("out/curve_n0.5000.json")
        );
    }
}
