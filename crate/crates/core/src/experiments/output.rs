//! CSV, JSON and SVG rendering of experiment results.
//!
//! Floats use Rust's shortest round-trip formatting, so equal results give
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use super::config::{ExperimentConfig, OutputFormat};
use super::run::{
    EdgeSpectrumResult, ExperimentOutput, GridResult, NoiseCompareResult, ProbDistResult,
    TimeSeriesResult,
};
use super::svg;
use crate::error::Result;

/// One rendered file: name relative to the output directory and contents.
#[derive(Clone, Debug, PartialEq)]
pub struct Rendered {
    pub file: String,
    pub contents: String,
}

pub fn to_json(out: &ExperimentOutput) -> Result<String> {
    let mut s = serde_json::to_string_pretty(out)?;
    s.push('\n');
    Ok(s)
}

fn probdist_csv(r: &ProbDistResult) -> String {
    let mut s = String::from("x,p\n");
    for (x, p) in r.x.iter().zip(&r.p) {
        let _ = writeln!(s, "{x},{p}");
    }
    s
}

/// Long format: one row per cell, first axis outermost, one column per layer.
pub fn grid_csv(r: &GridResult) -> String {
    let mut s = format!("{},{}", r.axes[0].name, r.axes[1].name);
    for l in &r.layers {
        s.push(',');
        s.push_str(&l.name);
    }
    s.push('\n');
    for (i, a) in r.axes[0].values.iter().enumerate() {
        for (j, b) in r.axes[1].values.iter().enumerate() {
            let _ = write!(s, "{a},{b}");
            for l in &r.layers {
                let _ = write!(s, ",{}", l.values[i][j]);
            }
            s.push('\n');
        }
    }
    s
}

fn series_csv(r: &TimeSeriesResult) -> String {
    let mut s = String::from("t");
    for ser in &r.series {
        let _ = write!(s, ",{}", ser.label.replace(' ', "_"));
    }
    s.push('\n');
    for (k, t) in r.t.iter().enumerate() {
        let _ = write!(s, "{t}");
        for ser in &r.series {
            let _ = write!(s, ",{}", ser.values[k]);
        }
        s.push('\n');
    }
    s
}

fn compare_csv(r: &NoiseCompareResult) -> String {
    let mut s = String::from("channel,p,step,x,prob\n");
    for t in &r.tables {
        for (cp, dist) in r.checkpoints.iter().zip(&t.distributions) {
            for (x, p) in r.x.iter().zip(dist) {
                let _ = writeln!(s, "{},{},{cp},{x},{p}", t.kind, t.p);
            }
        }
    }
    s
}

fn compare_summary_csv(r: &NoiseCompareResult) -> String {
    let mut s = String::from("channel,p");
    for cp in &r.checkpoints {
        let _ = write!(s, ",strength_w{}_t{cp}", r.window);
    }
    s.push_str(",retention\n");
    for t in &r.tables {
        let _ = write!(s, "{},{}", t.kind, t.p);
        for v in &t.strengths {
            let _ = write!(s, ",{v}");
        }
        let _ = writeln!(s, ",{}", t.retention);
    }
    s
}

fn spectrum_csv(r: &EdgeSpectrumResult) -> String {
    let mut s = String::from("index,quasienergy\n");
    for (i, e) in r.quasienergies.iter().enumerate() {
        let _ = writeln!(s, "{i},{e}");
    }
    s
}

fn modes_csv(r: &EdgeSpectrumResult) -> String {
    let mut s = String::from("quasienergy,target,interface_weight,chiral_expectation\n");
    for m in &r.modes {
        let target = serde_json::to_value(m.target)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{target},{},{}",
            m.quasienergy, m.interface_weight, m.chiral_expectation
        );
    }
    s
}

fn tables(out: &ExperimentOutput, stem: &str) -> Vec<Rendered> {
    let r = |suffix: &str, contents: String| Rendered {
        file: format!("{stem}{suffix}.csv"),
        contents,
    };
    match out {
        ExperimentOutput::ProbDist(p) => vec![r("", probdist_csv(p))],
        ExperimentOutput::Grid(g) => vec![r("", grid_csv(g))],
        ExperimentOutput::TimeSeries(t) => vec![r("", series_csv(t))],
        ExperimentOutput::NoiseCompare(c) => {
            vec![r("", compare_csv(c)), r("_summary", compare_summary_csv(c))]
        }
        ExperimentOutput::EdgeSpectrum(e) => {
            vec![r("", spectrum_csv(e)), r("_modes", modes_csv(e))]
        }
        ExperimentOutput::Validate(_) => vec![],
    }
}

fn plots(out: &ExperimentOutput, stem: &str) -> Vec<Rendered> {
    let r = |suffix: &str, contents: String| Rendered {
        file: format!("{stem}{suffix}.svg"),
        contents,
    };
    match out {
        ExperimentOutput::ProbDist(p) => {
            let xs: Vec<f64> = p.x.iter().map(|&x| x as f64).collect();
            vec![r(
                "",
                svg::line_plot(
                    "probability distribution",
                    "x",
                    &xs,
                    "p(x)",
                    &[("p".into(), p.p.clone())],
                ),
            )]
        }
        ExperimentOutput::Grid(g) => g
            .layers
            .iter()
            .map(|l| {
                let suffix = if g.layers.len() == 1 {
                    String::new()
                } else {
                    format!("_{}", l.name)
                };
                r(
                    &suffix,
                    svg::heatmap(
                        &l.name,
                        &g.axes[1].name,
                        &g.axes[1].values,
                        &g.axes[0].name,
                        &g.axes[0].values,
                        &l.values,
                    ),
                )
            })
            .collect(),
        ExperimentOutput::TimeSeries(t) => {
            let xs: Vec<f64> = t.t.iter().map(|&v| v as f64).collect();
            let series: Vec<(String, Vec<f64>)> = t
                .series
                .iter()
                .map(|s| (s.label.clone(), s.values.clone()))
                .collect();
            vec![r("", svg::line_plot("negativity", "t", &xs, "N", &series))]
        }
        ExperimentOutput::NoiseCompare(c) => {
            let xs: Vec<f64> = c.x.iter().map(|&x| x as f64).collect();
            c.checkpoints
                .iter()
                .enumerate()
                .map(|(k, cp)| {
                    let series: Vec<(String, Vec<f64>)> = c
                        .tables
                        .iter()
                        .map(|t| (t.kind.to_string(), t.distributions[k].clone()))
                        .collect();
                    r(
                        &format!("_t{cp}"),
                        svg::line_plot(
                            &format!("p(x) after {cp} steps"),
                            "x",
                            &xs,
                            "p(x)",
                            &series,
                        ),
                    )
                })
                .collect()
        }
        ExperimentOutput::EdgeSpectrum(e) => {
            let xs: Vec<f64> = (0..e.quasienergies.len()).map(|i| i as f64).collect();
            vec![r(
                "",
                svg::line_plot(
                    "ring quasienergies",
                    "index",
                    &xs,
                    "quasienergy",
                    &[("e".into(), e.quasienergies.clone())],
                ),
            )]
        }
        ExperimentOutput::Validate(_) => vec![],
    }
}

/// Files for the configured format. JSON always accompanies CSV and SVG as
/// `<stem>.json` so metadata and summaries are never lost.
pub fn render(config: &ExperimentConfig, out: &ExperimentOutput) -> Result<Vec<Rendered>> {
    let stem = config.stem();
    let mut files = vec![Rendered {
        file: format!("{stem}.json"),
        contents: to_json(out)?,
    }];
    match config.output.format {
        OutputFormat::Json => {}
        OutputFormat::Csv => files.extend(tables(out, &stem)),
        OutputFormat::Svg => {
            files.extend(tables(out, &stem));
            files.extend(plots(out, &stem));
        }
    }
    Ok(files)
}

pub fn write(config: &ExperimentConfig, out: &ExperimentOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&config.output.dir)?;
    render(config, out)?
        .into_iter()
        .map(|f| {
            let path = config.output.dir.join(&f.file);
            fs::write(&path, f.contents)?;
            Ok(path)
        })
        .collect()
}
