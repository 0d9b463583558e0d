//! Long-format plot tables `(series, x, y)` built from the report files of
//! a run directory. Nothing is rendered.

use std::collections::BTreeMap;
use std::path::Path;

use crate::config::Kind;
use crate::error::{CliError, CliResult};
use crate::output::{write_atomic, Table};

pub const PLOTDATA: &str = "plotdata.csv";

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn read(path: &Path) -> CliResult<Option<Csv>> {
        if !path.exists() {
            return Ok(None);
        }
        let mut r = csv::Reader::from_path(path)?;
        let header = r.headers()?.iter().map(String::from).collect();
        let rows =
            r.records().map(|rec| rec.map(|r| r.iter().map(String::from).collect())).collect::<Result<_, _>>()?;
        Ok(Some(Csv { header, rows }))
    }

    fn col(&self, name: &str) -> CliResult<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("report lacks column `{name}`")))
    }

    /// `(x, y)` pairs, skipping rows with an empty cell.
    fn pairs(&self, x: &str, y: &str) -> CliResult<Vec<(String, String)>> {
        let (i, j) = (self.col(x)?, self.col(y)?);
        Ok(self
            .rows
            .iter()
            .filter(|r| !r[i].is_empty() && !r[j].is_empty())
            .map(|r| (r[i].clone(), r[j].clone()))
            .collect())
    }
}

fn series(table: &mut Table, name: &str, pairs: Vec<(String, String)>) {
    for (x, y) in pairs {
        table.push(vec![name.to_string(), x, y]);
    }
}

fn kind_of(dir: &Path) -> CliResult<Kind> {
    let path = dir.join("summary.json");
    let text =
        std::fs::read_to_string(&path).map_err(|_| CliError::Usage(format!("no summary.json in {}", dir.display())))?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    serde_json::from_value(v["kind"].clone())
        .map_err(|_| CliError::Usage(format!("{} names no experiment kind", path.display())))
}

/// Builds `plotdata.csv` in `dir`: error-vs-h, value-vs-delta, ratio-vs-ball
/// and mu-vs-rho series as available.
pub fn emit_plotdata(dir: &Path) -> CliResult<Table> {
    if !dir.is_dir() {
        return Err(CliError::Usage(format!("{} is not a report directory", dir.display())));
    }
    let kind = kind_of(dir)?;
    let read = |name: &str| -> CliResult<Csv> {
        Csv::read(&dir.join(name))?
            .ok_or_else(|| CliError::Usage(format!("missing report {name} in {}", dir.display())))
    };
    let mut out = Table::new(&["series", "x", "y"]);
    match kind {
        Kind::Solve => {
            let t = read("solve.csv")?;
            series(&mut out, "linf_error_vs_h", t.pairs("h", "linf_error")?);
            series(&mut out, "energy_vs_h", t.pairs("h", "energy")?);
        }
        Kind::Obstacle => {
            let t = read("obstacle.csv")?;
            series(&mut out, "max_free_atom_vs_h", t.pairs("h", "max_free_atom")?);
            series(&mut out, "linf_error_vs_h", t.pairs("h", "linf_error")?);
        }
        Kind::Capacity => {
            let t = read("capacity.csv")?;
            series(&mut out, "capacity_vs_h", t.pairs("h", "value")?);
            series(&mut out, "rel_error_vs_h", t.pairs("h", "rel_error")?);
        }
        Kind::Hausdorff => {
            series(&mut out, "covering_vs_delta", read("hausdorff.csv")?.pairs("delta", "value")?);
        }
        Kind::Removability => {
            let t = read("removability.csv")?;
            series(&mut out, "mu_on_e_vs_h", t.pairs("h", "mu_on_e")?);
            series(&mut out, "barrier_gap_vs_h", t.pairs("h", "barrier_gap")?);
            if let Some(c) = Csv::read(&dir.join("removability_cover.csv"))? {
                series(&mut out, "covering_vs_delta", c.pairs("delta", "value")?);
            }
        }
        Kind::Regularity => {
            let summary = read("regularity_summary.csv")?;
            let check = summary.col("check")?;
            let mut names: Vec<String> = summary.rows.iter().map(|r| r[check].clone()).collect();
            names.dedup();
            names.sort();
            names.dedup();
            for name in names {
                let t = read(&format!("regularity_{name}.csv"))?;
                let (case, label, ratio) = (t.col("case")?, t.col("label")?, t.col("ratio")?);
                if name == "measure_density" {
                    let (cx, cy, radius, lhs) = (t.col("cx")?, t.col("cy")?, t.col("radius")?, t.col("lhs")?);
                    for r in &t.rows {
                        out.push(vec![
                            format!("{}/mu_vs_rho/{},{}", r[case], r[cx], r[cy]),
                            r[radius].clone(),
                            r[lhs].clone(),
                        ]);
                    }
                }
                // one series per case and label (a gehring series per δ),
                // indexed by ball
                let mut index: BTreeMap<String, usize> = BTreeMap::new();
                for r in &t.rows {
                    if r[ratio].is_empty() {
                        continue;
                    }
                    let key = if r[label].is_empty() {
                        format!("{}/{name}", r[case])
                    } else {
                        format!("{}/{name}/{}", r[case], r[label])
                    };
                    let k = index.entry(key.clone()).or_insert(0);
                    out.push(vec![key, k.to_string(), r[ratio].clone()]);
                    *k += 1;
                }
            }
        }
    }
    write_atomic(&dir.join(PLOTDATA), &out.to_bytes()?)?;
    Ok(out)
}
