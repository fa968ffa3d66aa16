use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sidecar written next to every CSV as `<file>.meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub seed: Option<u64>,
    /// Echo of the experiment configuration.
    pub config: serde_json::Value,
    pub wall_clock_seconds: f64,
    pub written_unix: u64,
    /// Free-form extras (calibration results, summaries).
    #[serde(default)]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

impl Metadata {
    pub fn new(config: &impl Serialize, seed: Option<u64>, wall_clock_seconds: f64) -> Result<Self> {
        let config = serde_json::to_value(config).map_err(|e| Error::Parse(e.to_string()))?;
        let written_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Ok(Metadata {
            tool: "firefly".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            config,
            wall_clock_seconds,
            written_unix,
            extra: Default::default(),
        })
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        if let Ok(v) = serde_json::to_value(value) {
            self.extra.insert(key.into(), v);
        }
        self
    }
}

fn io_err(path: &Path, e: impl ToString) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Write `rows` under `header` to `path` and the metadata sidecar. The CSV
/// body depends only on the rows, so equal inputs give equal bytes.
pub fn write_csv<R: Serialize>(path: &Path, header: &[&str], rows: &[R], meta: &Metadata) -> Result<PathBuf> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))?;
    let side = sidecar_path(path);
    let json = serde_json::to_string_pretty(meta).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(&side, json + "\n").map_err(|e| io_err(&side, e))?;
    Ok(side)
}

pub fn read_metadata(csv: &Path) -> Result<Metadata> {
    let side = sidecar_path(csv);
    let text = fs::read_to_string(&side).map_err(|e| io_err(&side, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

/// Reference constants for the plotting scripts.
pub fn write_constants(path: &Path) -> Result<()> {
    fs::write(path, crate::constants::to_json() + "\n").map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{cluster_rate_experiment, ExperimentConfig, CLUSTER_HEADER};

    #[test]
    fn header_only_for_empty_results() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/empty.csv");
        let meta = Metadata::new(&ExperimentConfig::default(), Some(1), 0.0).unwrap();
        write_csv::<crate::harness::ClusterRow>(&p, &CLUSTER_HEADER, &[], &meta).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "kappa,t,L,runs,edges_sampled,p_hat,stderr,sqrt_t_p_hat\n");
        assert_eq!(read_metadata(&p).unwrap(), meta);
    }

    #[test]
    fn rerun_gives_identical_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig { kappa: 5, times: vec![4, 16, 64], length: 1024, trials: 2, seed: 3, ..Default::default() };
        let mut bodies = Vec::new();
        for name in ["a.csv", "b.csv"] {
            let r = cluster_rate_experiment(&cfg).unwrap();
            let p = dir.path().join(name);
            let meta = Metadata::new(&cfg, Some(cfg.seed), 0.1).unwrap().with("note", "x");
            write_csv(&p, &CLUSTER_HEADER, &r.rows, &meta).unwrap();
            bodies.push(fs::read(&p).unwrap());
            let back = read_metadata(&p).unwrap();
            let echoed: ExperimentConfig = serde_json::from_value(back.config).unwrap();
            assert_eq!(echoed, cfg);
        }
        assert_eq!(bodies[0], bodies[1]);
        let text = String::from_utf8(bodies[0].clone()).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().nth(1).unwrap().starts_with("5,4,1024,2,2048,"));
    }

    #[test]
    fn unwritable_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let meta = Metadata::new(&(), None, 0.0).unwrap();
        let e = write_csv::<()>(&blocker.join("out.csv"), &["a"], &[], &meta).unwrap_err();
        assert!(matches!(e, Error::Io { .. }));
    }

    #[test]
    fn constants_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("constants.json");
        write_constants(&p).unwrap();
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
        assert!((v["q_minus_ratio"].as_f64().unwrap() - 1.5 * 3f64.sqrt()).abs() < 1e-15);
    }
}
