//! Report emission and the append-only run ledger.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const LEDGER_ENV: &str = "WSAT_LEDGER";
const DEFAULT_LEDGER: &str = "runs.ndjson";

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    #[serde(flatten)]
    result: &'a T,
    timestamp: String,
}

#[derive(Serialize)]
struct LedgerLine<'a> {
    timestamp: &'a str,
    command: &'a str,
    config_hash: String,
    result_digest: String,
    exit_code: i32,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn ledger_path() -> PathBuf {
    std::env::var_os(LEDGER_ENV).map_or_else(|| PathBuf::from(DEFAULT_LEDGER), PathBuf::from)
}

/// Output sink: a file given by `--out`, or stdout.
pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
        None => Box::new(std::io::stdout()),
    })
}

/// Writes `result` as one JSON object with the timestamp as its last field, then
/// appends a ledger line keyed by the hash of `config`.
pub fn emit<C: Serialize, T: Serialize>(command: &str, config: &C, result: &T, out: Option<&Path>, exit_code: i32) -> Result<()> {
    let timestamp = chrono::Utc::now().to_rfc3339();
    let env = Envelope {
        command,
        result,
        timestamp: timestamp.clone(),
    };
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, &env)?;
    writeln!(w)?;
    w.flush()?;
    record(command, config, &serde_json::to_vec(result)?, &timestamp, exit_code)
}

/// Appends one line to the ledger; `body` is the timestamp-free report.
pub fn record<C: Serialize>(command: &str, config: &C, body: &[u8], timestamp: &str, exit_code: i32) -> Result<()> {
    let line = LedgerLine {
        timestamp,
        command,
        config_hash: sha256_hex(&serde_json::to_vec(config)?),
        result_digest: sha256_hex(body),
        exit_code,
    };
    let path = ledger_path();
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .with_context(|| format!("cannot open ledger {}", path.display()))?;
    writeln!(f, "{}", serde_json::to_string(&line)?)?;
    Ok(())
}
