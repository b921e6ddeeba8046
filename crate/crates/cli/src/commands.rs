use std::path::Path;

use serde::Deserialize;
use serde_json::json;

use lmbd::asymptotics::{
    convergence_report, dirac_convergence_report, geometric_probes, LimitRegime, OmegaEdge, PsiEdge,
};
use lmbd::ensemble::{
    ensemble_accuracy, fit_mle, majority_threshold, model_comparison, CountSample, EnsembleSpec,
};
use lmbd::factorization::{
    d_n, delta, delta_grid, factor_product, tau1_region_grid, theorem2_check, GridSpec, RegionGrid,
};
use lmbd::gauss::clt_scan;
use lmbd::mbd::{log_tau, sample};
use lmbd::{moments, pmf, ModelParams};

use crate::output::{Artifact, Cell, RunManifest, Table};
use crate::{Command, Failure, GridArgs, ModelArgs, OmegaEdgeArg, OutputArgs, PsiEdgeArg};

type Dispatched = (RunManifest, Artifact, OutputArgs);

pub(crate) fn dispatch(command: Command) -> Result<Dispatched, Failure> {
    match command {
        Command::Pmf { model, output } => {
            let params = model_params(&model)?;
            let table = pmf(&params);
            let cdf = table.cdf_table();
            let rows = (0..=params.n())
                .map(|y| {
                    vec![
                        Cell::from(y),
                        Cell::from(table.prob(y).unwrap()),
                        Cell::from(table.log_prob(y).unwrap()),
                        Cell::from(cdf[y]),
                    ]
                })
                .collect();
            let artifact = Artifact::Table(Table {
                header: vec!["y", "prob", "log_prob", "cdf"],
                rows,
            });
            Ok((model_manifest("pmf", &model), artifact, output))
        }
        Command::Cdf { model, y, output } => {
            let params = model_params(&model)?;
            let table = pmf(&params);
            let report = json!({ "y": y, "cdf": table.cdf(y)?, "sf": table.sf(y)? });
            Ok((
                model_manifest("cdf", &model).param("y", y),
                Artifact::Report(report),
                output,
            ))
        }
        Command::Moments { model, output } => {
            let params = model_params(&model)?;
            Ok((
                model_manifest("moments", &model),
                Artifact::report(&moments(&params)),
                output,
            ))
        }
        Command::Tau { model, r, output } => {
            let params = model_params(&model)?;
            let log = log_tau(r, &params)?;
            let report = json!({ "r": r, "tau": log.exp(), "log_tau": log });
            Ok((
                model_manifest("tau", &model).param("r", r),
                Artifact::Report(report),
                output,
            ))
        }
        Command::Limits {
            n,
            omega_edge,
            psi_edge,
            psi,
            omega,
            probes,
            output,
        } => {
            let omega_edge = match omega_edge {
                OmegaEdgeArg::ToZero => OmegaEdge::ToZero,
                OmegaEdgeArg::ToInfinity => OmegaEdge::ToInfinity,
            };
            let psi_edge = match psi_edge {
                PsiEdgeArg::None => PsiEdge::None,
                PsiEdgeArg::ToZero => PsiEdge::ToZero,
                PsiEdgeArg::ToOne => PsiEdge::ToOne,
            };
            let regime = LimitRegime::new(omega_edge, psi_edge, n)?;
            let mut manifest = RunManifest::new("limits")
                .param("n", n)
                .param("omega_edge", omega_edge)
                .param("psi_edge", psi_edge);
            let report = match psi_edge {
                PsiEdge::None => {
                    let psi = psi.ok_or_else(|| {
                        Failure::Usage("--psi is required when --psi-edge is none".into())
                    })?;
                    let probes = probes.unwrap_or_else(|| geometric_probes(omega_edge));
                    manifest = manifest.param("psi", psi).param("probes", &probes);
                    convergence_report(&regime, psi, &probes)?
                }
                edge => {
                    let omega = omega.ok_or_else(|| {
                        Failure::Usage("--omega is required with a psi edge".into())
                    })?;
                    let probes = probes.unwrap_or_else(|| {
                        (1..=8)
                            .map(|k| {
                                let d = 10f64.powi(-k);
                                if edge == PsiEdge::ToZero {
                                    d
                                } else {
                                    1.0 - d
                                }
                            })
                            .collect()
                    });
                    manifest = manifest.param("omega", omega).param("probes", &probes);
                    dirac_convergence_report(&regime, omega, &probes)?
                }
            };
            Ok((manifest, Artifact::report(&report), output))
        }
        Command::Clt {
            ns,
            psi,
            omega,
            output,
        } => {
            let rows = clt_scan(&ns, psi, omega)?
                .into_iter()
                .map(|r| {
                    vec![
                        r.n.into(),
                        r.psi.into(),
                        r.omega.into(),
                        r.ks_distance.into(),
                    ]
                })
                .collect();
            let manifest = RunManifest::new("clt")
                .param("ns", &ns)
                .param("psi", psi)
                .param("omega", omega);
            let artifact = Artifact::Table(Table {
                header: vec!["n", "psi", "omega", "ks_distance"],
                rows,
            });
            Ok((manifest, artifact, output))
        }
        Command::DeltaGrid { grid, output } => {
            let result = delta_grid(&grid_spec(&grid)?)?;
            Ok((
                grid_manifest("delta-grid", &grid),
                grid_artifact(&result),
                output,
            ))
        }
        Command::Tau1Grid { grid, output } => {
            let result = tau1_region_grid(&grid_spec(&grid)?)?;
            Ok((
                grid_manifest("tau1-grid", &grid),
                grid_artifact(&result),
                output,
            ))
        }
        Command::Dn { model, output } => {
            let params = model_params(&model)?;
            let report = json!({
                "d_n": d_n(&params),
                "factor_product": factor_product(&params),
                "delta": delta(&params).value(),
                "ordering": theorem2_check(&params),
            });
            Ok((
                model_manifest("dn", &model),
                Artifact::Report(report),
                output,
            ))
        }
        Command::Accuracy { model, output } => {
            let params = model_params(&model)?;
            let report = json!({
                "threshold": majority_threshold(params.n()),
                "accuracy": ensemble_accuracy(&EnsembleSpec::new(params)),
            });
            Ok((
                model_manifest("accuracy", &model),
                Artifact::Report(report),
                output,
            ))
        }
        Command::Compare { n, input, output } => {
            let sample = read_counts(n, &input)?;
            let manifest = input_manifest("compare", n, &input);
            Ok((
                manifest,
                Artifact::report(&model_comparison(&sample)?),
                output,
            ))
        }
        Command::Fit { n, input, output } => {
            let sample = read_counts(n, &input)?;
            let manifest = input_manifest("fit", n, &input);
            Ok((manifest, Artifact::report(&fit_mle(&sample)?), output))
        }
        Command::Sample {
            model,
            count,
            seed,
            output,
        } => {
            let params = model_params(&model)?;
            let tally = CountSample::from_draws(params.n(), &sample(&params, count, seed))
                .map(|s| s.counts)
                .unwrap_or_else(|_| vec![0; params.n() + 1]);
            let rows = tally
                .iter()
                .enumerate()
                .map(|(y, &c)| vec![y.into(), c.into()])
                .collect();
            let mut manifest = model_manifest("sample", &model).param("count", count);
            manifest.seed = Some(seed);
            Ok((
                manifest,
                Artifact::Table(Table {
                    header: vec!["y", "count"],
                    rows,
                }),
                output,
            ))
        }
    }
}

fn model_params(model: &ModelArgs) -> Result<ModelParams, Failure> {
    Ok(ModelParams::new(model.n, model.psi, model.omega)?)
}

fn model_manifest(command: &'static str, model: &ModelArgs) -> RunManifest {
    RunManifest::new(command)
        .param("n", model.n)
        .param("psi", model.psi)
        .param("omega", model.omega)
}

fn grid_spec(grid: &GridArgs) -> Result<GridSpec, Failure> {
    Ok(GridSpec::linear(
        grid.n,
        (grid.psi_min, grid.psi_max, grid.psi_steps),
        (grid.omega_min, grid.omega_max, grid.omega_steps),
    )?)
}

fn grid_manifest(command: &'static str, grid: &GridArgs) -> RunManifest {
    RunManifest::new(command)
        .param("n", grid.n)
        .param("psi_min", grid.psi_min)
        .param("psi_max", grid.psi_max)
        .param("psi_steps", grid.psi_steps)
        .param("omega_min", grid.omega_min)
        .param("omega_max", grid.omega_max)
        .param("omega_steps", grid.omega_steps)
}

fn grid_artifact(grid: &RegionGrid) -> Artifact {
    let rows = grid
        .cells
        .iter()
        .map(|c| vec![c.psi.into(), c.omega.into(), c.value.into(), c.flag.into()])
        .collect();
    Artifact::Table(Table {
        header: vec!["psi", "omega", "value", "flag"],
        rows,
    })
}

fn input_manifest(command: &'static str, n: usize, input: &Path) -> RunManifest {
    RunManifest::new(command)
        .param("n", n)
        .param("input", input.display().to_string())
}

#[derive(Deserialize)]
struct CountRow {
    y: usize,
    count: u64,
}

fn read_counts(n: usize, path: &Path) -> Result<CountSample, Failure> {
    let fail = |e: &dyn std::fmt::Display| Failure::Domain(format!("{}: {e}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| fail(&e))?;
    let pairs: Vec<(usize, u64)> = reader
        .deserialize::<CountRow>()
        .map(|row| row.map(|r| (r.y, r.count)))
        .collect::<Result<_, _>>()
        .map_err(|e| fail(&e))?;
    Ok(CountSample::from_pairs(n, &pairs)?)
}
