use pcmap_core::covers::{cover_certificate, finiteness_certificate, FinitenessStatus};
use pcmap_core::scanner::{
    box_dimension, census, classify, classify_circle, geometric_scales, reduce, refine_and_boxdim, scan,
    CircleAffineMap, ClassificationStatus, ScanStatus,
};
use pcmap_core::symbolic::{check_doubling, enumerate_itineraries, find_singular_connection, growth_table};
use pcmap_core::{Error, PiecewiseContraction, Scalar};
use serde::Serialize;

use crate::config::{number_or, MapForm, RunConfig};
use crate::report::*;
use crate::{CliError, Command, EXIT_INCONCLUSIVE, EXIT_OK};

/// What a command produced. `files` are written under `--out` when given.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub files: Vec<(String, String)>,
    pub code: i32,
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| CliError::Internal(e.to_string()))
}

fn jsonl<T: Serialize>(values: &[T]) -> Result<String, CliError> {
    let mut out = String::new();
    for v in values {
        out += &serde_json::to_string(v).map_err(|e| CliError::Internal(e.to_string()))?;
        out.push('\n');
    }
    Ok(out)
}

fn single(name: &str, body: String) -> Output {
    Output {
        files: vec![(name.to_string(), body.clone())],
        stdout: body,
        ..Output::default()
    }
}

fn needs_line<S: Scalar>(cfg: &RunConfig, command: &str) -> Result<PiecewiseContraction<S>, CliError> {
    match cfg.map::<S>()? {
        MapForm::Line(f) => Ok(f),
        MapForm::Circle(_) => Err(CliError::Validation(format!(
            "command `{command}` needs a line map (`line.*` keys)"
        ))),
    }
}

fn needs_circle<S: Scalar>(cfg: &RunConfig, command: &str) -> Result<CircleAffineMap<S>, CliError> {
    match cfg.map::<S>()? {
        MapForm::Circle(f) => Ok(f),
        MapForm::Line(_) => Err(CliError::Validation(format!(
            "command `{command}` needs a circle map (`circle.*` keys)"
        ))),
    }
}

fn validation(key: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| CliError::Validation(format!("{key}: {e}"))
}

pub fn execute<S: Scalar>(command: &Command, cfg: &RunConfig) -> Result<Output, CliError> {
    let backend = S::BACKEND.as_str().to_string();
    match command {
        Command::Classify => {
            let budget = cfg.budget()?;
            let (map, x0, result) = match cfg.map::<S>()? {
                MapForm::Line(f) => {
                    let x0: S = number_or(&cfg.classify.x0, "classify.x0", "0")?;
                    let c = classify(&f, &x0, &budget);
                    (MapSpec::Line(LineSpec::of(&f)), x0, Some(c))
                }
                MapForm::Circle(f) => {
                    let x0: S = number_or(&cfg.classify.x0, "classify.x0", "0")?;
                    let c = match classify_circle(&f, &x0, &budget) {
                        Ok(c) => Some(c),
                        Err(Error::ZeroSlopeCircle) => None,
                        Err(e) => return Err(validation("circle")(e)),
                    };
                    (MapSpec::Circle(CircleSpec::of(&f)), x0, c)
                }
            };
            let report = match result {
                None => ClassifyReport {
                    backend,
                    map,
                    x0: text(&x0),
                    status: "exceptional set empty".into(),
                    period: None,
                    orbit: Vec::new(),
                    iterations_used: 0,
                },
                Some(c) => {
                    let (status, orbit) = match &c.status {
                        ClassificationStatus::Periodic { orbit, .. } => ("periodic", texts(orbit)),
                        ClassificationStatus::Undecided => ("undecided", Vec::new()),
                    };
                    ClassifyReport {
                        backend,
                        map,
                        x0: text(&x0),
                        status: status.into(),
                        period: c.period(),
                        orbit,
                        iterations_used: c.iterations_used,
                    }
                }
            };
            Ok(single("classify.json", json(&report)?))
        }

        Command::Itineraries => {
            let f = needs_line::<S>(cfg, "itineraries")?;
            let depth = cfg.itineraries.depth.unwrap_or(6);
            positive(depth, "itineraries.depth")?;
            let cells: Vec<CellRecord> = enumerate_itineraries(&f, depth)
                .into_iter()
                .map(|c| CellRecord {
                    depth,
                    lo: text(&c.interval.lo),
                    hi: text(&c.interval.hi),
                    word: c.word.symbols().to_vec(),
                })
                .collect();
            Ok(single("itineraries.jsonl", jsonl(&cells)?))
        }

        Command::Growth => {
            let f = needs_line::<S>(cfg, "growth")?;
            let g = &cfg.growth;
            let n_max = g.n_max.unwrap_or(12);
            positive(n_max, "growth.n_max")?;
            let epsilon: S = number_or(&g.epsilon, "growth.epsilon", "0")?;
            let samples = g.samples.unwrap_or(65);
            positive(samples, "growth.samples")?;
            let rho = g.rho.unwrap_or(std::f64::consts::SQRT_2);
            if !(rho > 1.0) {
                return Err(CliError::Validation("growth.rho: must exceed 1".into()));
            }
            let table = growth_table(&f, n_max, &epsilon, samples);
            let mut records: Vec<GrowthRecord> = table
                .rows
                .iter()
                .map(|r| GrowthRecord::Row {
                    n: r.n,
                    count: r.count,
                    log_rate: r.log_rate,
                })
                .collect();
            let d = check_doubling(&f, &epsilon, rho, n_max, samples, g.guard_depth.unwrap_or(12));
            records.push(GrowthRecord::Doubling {
                rho,
                m: d.m,
                tau: d.tau.as_ref().map(text),
                n0: d.n0,
                status: format!("{:?}", d.status).to_lowercase(),
                holds: d.holds,
                violations: d.violations.clone(),
                constant: d.constant,
                bound_holds: d.bound_holds,
                residue_constant: d.residue_constant,
                residue_bound_holds: d.residue_bound_holds,
                stable_band: text(&d.stable_band),
                guard_depth: d.guard_depth,
            });
            Ok(single("growth.jsonl", jsonl(&records)?))
        }

        Command::Singular => {
            let f = needs_line::<S>(cfg, "singular")?;
            let depth = cfg.singular.depth.unwrap_or(12);
            let w = find_singular_connection(&f, depth);
            let report = SingularReport {
                depth,
                found: w.is_some(),
                word: w.as_ref().map(|w| w.word.symbols().to_vec()),
                source: w.as_ref().map(|w| w.source),
                target: w.as_ref().map(|w| w.target),
                value: w.as_ref().map(|w| text(&w.value)),
            };
            Ok(single("singular.jsonl", jsonl(&[report])?))
        }

        Command::Cover => {
            let f = needs_line::<S>(cfg, "cover")?;
            let c = &cfg.cover;
            let epsilon: S = number_or(&c.epsilon, "cover.epsilon", "0")?;
            let samples = c.samples.unwrap_or(1);
            positive(samples, "cover.samples")?;
            let d = c.d.unwrap_or(1.0);
            let n = c.n.unwrap_or(3);
            let cert = cover_certificate(&f, &epsilon, d, n, samples).map_err(validation("cover"))?;
            let report = CoverReport {
                backend,
                map: MapSpec::Line(LineSpec::of(&f)),
                epsilon: text(&epsilon),
                samples,
                depth: cert.depth,
                dimension: cert.dimension,
                lambda_phi: text(&cert.lambda_phi),
                r_phi: text(&cert.r_phi),
                radius: text(&cert.radius),
                word_count: cert.word_count,
                centers: cert
                    .centers
                    .iter()
                    .map(|(w, c)| CenterRecord {
                        word: w.symbols().to_vec(),
                        center: text(c),
                    })
                    .collect(),
                bound: text(&cert.bound),
                bound_backend: cert.bound_backend.as_str().into(),
            };
            Ok(single("cover.json", json(&report)?))
        }

        Command::Certify => {
            let f = needs_line::<S>(cfg, "certify")?;
            let c = &cfg.certify;
            let delta: S = number_or(&c.delta, "certify.delta", "0")?;
            let epsilon: S = number_or(&c.epsilon, "certify.epsilon", "0")?;
            let n_max = c.n_max.unwrap_or(16);
            positive(n_max, "certify.n_max")?;
            let samples = c.samples.unwrap_or(1);
            positive(samples, "certify.samples")?;
            let guard_depth = c.guard_depth.unwrap_or(12);
            let v = finiteness_certificate(&f, &delta, &epsilon, n_max, samples, guard_depth);
            let report = CertifyReport {
                backend,
                map: MapSpec::Line(LineSpec::of(&f)),
                delta: text(&delta),
                epsilon: text(&epsilon),
                n_max,
                samples,
                lambda_phi: text(f.ifs().lambda_phi()),
                r_phi: text(f.ifs().r_phi()),
                tau: v.tau.as_ref().map(text),
                n_star: v.n_star,
                status: match v.status {
                    FinitenessStatus::CertifiedFinite => "certified-finite",
                    FinitenessStatus::Inconclusive => "inconclusive",
                }
                .into(),
                inside_band: v.inside_band,
                guard_depth,
                no_singular_connection: v.no_singular_connection,
            };
            let mut out = single("certify.json", json(&report)?);
            if !v.inside_band {
                out.stderr += &format!(
                    "warning: |delta| = |{}| is not below epsilon = {}; the separation argument assumes |delta| < epsilon\n",
                    text(&delta),
                    text(&epsilon)
                );
            }
            if v.status == FinitenessStatus::Inconclusive {
                out.code = EXIT_INCONCLUSIVE;
            }
            Ok(out)
        }

        Command::Scan => {
            let f = needs_circle::<S>(cfg, "scan")?;
            let budget = cfg.budget()?;
            let s = &cfg.scan;
            let grid = s.grid.unwrap_or(200);
            let levels = s.levels.unwrap_or(0);
            let report = scan(&f, grid, &budget).map_err(validation("scan"))?;
            let ell = report.gap.ell.to_f64();
            let finest = 2.0 * ell / (grid as f64 * 2f64.powi(levels as i32));
            let count = s.scale_count.unwrap_or(8);
            if count < 2 {
                return Err(CliError::Validation("scan.scale_count: needs at least 2 scales".into()));
            }
            let top = ell / 2.0;
            let ratio = s
                .scale_ratio
                .unwrap_or_else(|| (finest / top).powf(1.0 / (count - 1) as f64).min(0.5));
            if !(ratio > 0.0 && ratio < 1.0) {
                return Err(CliError::Validation("scan.scale_ratio: must lie in (0, 1)".into()));
            }
            let scales = geometric_scales(top, ratio, count);
            let (rows, flagged, boxdim) = if levels > 0 {
                let r = refine_and_boxdim(&f, &report, levels, &scales).map_err(validation("scan"))?;
                (r.rows, r.flagged, r.boxdim.expect("box dimension after refinement"))
            } else {
                let set: Vec<(f64, f64)> = report.flagged.iter().map(|c| (c.lo.to_f64(), c.hi.to_f64())).collect();
                let b = box_dimension(&set, &scales);
                (report.rows.clone(), report.flagged.clone(), b)
            };

            let mut csv = String::from("delta,status,period,iterations\n");
            for r in &rows {
                let period = r.period.map(|p| p.to_string()).unwrap_or_default();
                csv += &format!("{},{},{},{}\n", text(&r.delta), r.status.as_str(), period, r.iterations);
            }
            let unresolved = rows.iter().filter(|r| r.status == ScanStatus::Unresolved).count();
            let sidecar = ScanSidecar {
                generated_at: chrono::Utc::now().to_rfc3339(),
                seed: cfg.seed(),
                backend,
                map: MapSpec::Circle(CircleSpec::of(&f)),
                gap_center: text(&report.gap.c),
                window_half_width: text(&report.gap.ell),
                grid,
                budget: BudgetSpec::from(&budget),
                unresolved,
                unresolved_fraction: unresolved as f64 / rows.len() as f64,
                refinement_levels: levels,
                flagged: flagged.iter().map(|c| [text(&c.lo), text(&c.hi)]).collect(),
                boxdim: BoxDimReport {
                    scales: boxdim.scales,
                    counts: boxdim.counts,
                    slope: boxdim.slope,
                    degenerate: boxdim.degenerate,
                },
            };
            let side = json(&sidecar)?;
            Ok(Output {
                stdout: csv.clone(),
                stderr: String::new(),
                files: vec![("scan.csv".into(), csv), ("scan.json".into(), side)],
                code: EXIT_OK,
            })
        }

        Command::Reduce => {
            let f = needs_circle::<S>(cfg, "reduce")?;
            let red = reduce(&f).map_err(validation("circle"))?;
            let r = &cfg.reduce;
            let delta: S = number_or(&r.delta, "reduce.delta", "0")?;
            let x0: S = number_or(&r.x0, "reduce.x0", "0")?;
            let steps = r.steps.unwrap_or(20);
            let shift = red.shift(&delta).map_err(validation("reduce.delta"))?;
            let g = red.rotated_line(&delta).map_err(validation("reduce.delta"))?;
            let h = red.conjugate(&delta).map_err(validation("reduce.delta"))?;
            let y0 = red.to_line(&x0);
            let rotated: Vec<S> = g.orbit(&y0, steps).into_iter().map(|(y, _)| y).collect();
            let conjugate: Vec<S> = h
                .orbit(&(y0 - shift.clone()), steps)
                .into_iter()
                .map(|(z, _)| z + shift.clone())
                .collect();
            let tol = f.tol();
            let holds = rotated.iter().zip(&conjugate).all(|(a, b)| a.approx_eq(b, tol));
            let report = ReduceReport {
                backend,
                map: MapSpec::Circle(CircleSpec::of(&f)),
                gap_center: text(&red.gap.c),
                window_half_width: text(&red.gap.ell),
                line: LineSpec::of(&red.line),
                delta: text(&delta),
                shift: text(&shift),
                conjugate_breakpoints: texts(h.breakpoints().as_slice()),
                x0: text(&x0),
                steps,
                rotated_orbit: texts(&rotated),
                conjugate_orbit: texts(&conjugate),
                conjugacy_holds: holds,
            };
            Ok(single("reduce.json", json(&report)?))
        }

        Command::Census => {
            let f = needs_line::<S>(cfg, "census")?;
            let budget = cfg.budget()?;
            let samples = cfg.census.samples.unwrap_or(100);
            let seed = cfg.seed();
            let c = census(f.ifs(), samples, &budget, seed).map_err(validation("census"))?;
            let report = CensusSummary {
                backend,
                seed,
                k: c.k,
                samples,
                budget: BudgetSpec::from(&budget),
                classified_fraction: c.classified_fraction(),
                max_orbits: c.max_orbits(),
                violations: c.violations(),
                rows: c
                    .rows
                    .iter()
                    .map(|r| CensusRecord {
                        breakpoints: texts(&r.breakpoints),
                        orbits: r.orbits,
                        periods: r.periods.clone(),
                        classified: r.classified,
                    })
                    .collect(),
            };
            Ok(single("census.json", json(&report)?))
        }
    }
}

fn positive(v: usize, key: &str) -> Result<(), CliError> {
    if v == 0 {
        Err(CliError::Validation(format!("{key}: must be at least 1")))
    } else {
        Ok(())
    }
}
