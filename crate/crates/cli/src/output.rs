//! Writes tables, JSON documents, the manifest and the optional plot script.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

use crate::commands::{processes, Artifact, Outcome, Table};
use crate::config::Config;
use crate::{Failure, Sub};

fn csv(t: &Table) -> String {
    let mut s = t.header.join(",");
    s.push('\n');
    for r in &t.rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn write_all(cfg: &Config, sub: Sub, outcome: &Outcome) -> Result<(), Failure> {
    let dir = PathBuf::from(cfg.raw("run.out"));
    fs::create_dir_all(&dir).map_err(|e| Failure::io(&dir, e))?;
    let mut names = Vec::new();
    for (name, art) in &outcome.files {
        let text = match art {
            Artifact::Csv(t) => csv(t),
            Artifact::Json(v) => pretty(v),
        };
        write(&dir.join(name), &text)?;
        names.push(*name);
    }
    if cfg.bool("run.plot")? {
        write(&dir.join("plot.py"), PLOT)?;
        names.push("plot.py");
    }
    let config: Map<String, Value> = cfg.entries().iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect();
    let labels: Vec<String> = processes(cfg)?.iter().map(|p| p.label().to_string()).collect();
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let manifest = json!({
        "tool": "optoring",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": sub.name(),
        "parallel": optoring::par::is_parallel(),
        "processes": labels,
        "config": config,
        "derived": outcome.derived,
        "outputs": names,
        "timestamp": stamp,
    });
    write(&dir.join("manifest.json"), &pretty(&manifest))
}

const PLOT: &str = r#"# Quick look at the CSV files in this directory.
import csv, glob, os
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
for path in sorted(glob.glob(os.path.join(here, "*.csv"))):
    with open(path) as f:
        rows = list(csv.reader(f))
    head, body = rows[0], rows[1:]
    name = os.path.basename(path)
    fig, ax = plt.subplots()
    if name == "map.csv":
        import numpy as np
        data = np.array(body, dtype=float)
        gp = np.unique(data[:, 0]); gm = np.unique(data[:, 1])
        z = np.log10(np.maximum(data[:, 2], 1e-300)).reshape(len(gm), len(gp))
        im = ax.imshow(z, origin="lower", aspect="auto", extent=[gp[0], gp[-1], gm[0], gm[-1]])
        fig.colorbar(im, label="log10 I_nl")
        ax.set_xlabel(head[0]); ax.set_ylabel(head[1])
    elif name == "atlas.csv":
        for p in sorted({r[0] for r in body}):
            pts = [(float(r[2]), float(r[1])) for r in body if r[0] == p]
            ax.plot(*zip(*pts), label=p)
        ax.set_xlabel(head[2]); ax.set_ylabel(head[1]); ax.legend()
    else:
        x = [float(r[0]) for r in body]
        for j in range(1, len(head)):
            ax.plot(x, [float(r[j]) for r in body], label=head[j])
        ax.set_xlabel(head[0]); ax.legend()
    fig.savefig(path[:-4] + ".png", dpi=120)
"#;
