//! Command-line runner and local decision-graph service for `intree`.

pub mod args;
pub mod service;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use args::{Cli, Command, Generator};
use intree::{GraphDistances, TwoGaussians};
use serde_json::Value;

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(path: Option<&Path>, value: &impl serde::Serialize) -> Result<()> {
    let mut out = writer(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Distance rows with infinities spelled `"inf"`.
pub fn distances_json(d: &GraphDistances) -> Value {
    let rows = d
        .to_rows()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| {
                    if v.is_finite() {
                        Value::from(v)
                    } else {
                        Value::from("inf")
                    }
                })
                .collect()
        })
        .collect::<Vec<Value>>();
    serde_json::json!({ "n": d.len(), "distances": rows })
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Cluster {
            run,
            out,
            dump_distances,
        } => {
            let dataset = run.load()?;
            let config = run.config()?;
            let result = intree::run_pipeline(&config, &dataset)?;
            write_json(out.as_deref(), &result.to_json(&dataset, &config))?;
            if let Some(path) = dump_distances {
                write_json(Some(&path), &distances_json(&result.distances))?;
            }
            match &result.report {
                Some(report) => eprintln!("{}: {}", dataset.name(), report.summary()),
                None => eprintln!(
                    "{}: clusters={} cut={}",
                    dataset.name(),
                    result.assignment.n_clusters,
                    result.cut_nodes.len()
                ),
            }
        }
        Command::Graph { run, out } => {
            let dataset = run.load()?;
            let config = run.config()?;
            let graph = intree::pipeline::build_graph(&config, &dataset)?;
            write_json(out.as_deref(), &graph.to_json())?;
        }
        Command::Serve { run, port } => {
            let dataset = run.load()?;
            let config = run.config()?;
            tokio::runtime::Runtime::new()?.block_on(service::serve(port, dataset, config))?;
        }
        Command::Gen {
            what:
                Generator::TwoGaussians {
                    n,
                    stddev,
                    centers,
                    seed,
                    out,
                },
        } => {
            anyhow::ensure!(
                centers.len() % 2 == 0 && !centers.is_empty(),
                "--centers takes both centers flattened, e.g. 0,0,9,0"
            );
            let (a, b) = centers.split_at(centers.len() / 2);
            let params = TwoGaussians {
                n_per_cluster: n,
                centers: [a.to_vec(), b.to_vec()],
                stddev,
                seed,
            };
            let dataset = intree::gen_two_gaussians(&params)?;
            let mut w = writer(out.as_deref())?;
            intree::dataset::write_csv(&dataset, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_distances_become_strings() {
        let inf = f64::INFINITY;
        let d = GraphDistances::from_dense(2, vec![0.0, inf, inf, 0.0]).unwrap();
        assert_eq!(
            distances_json(&d),
            serde_json::json!({"n": 2, "distances": [[0.0, "inf"], ["inf", 0.0]]})
        );
    }
}
