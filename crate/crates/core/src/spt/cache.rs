// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! On-disk ground-state cache. One file per key: a single JSON header line
//! followed by the amplitudes as little-endian `f64` pairs (re, im).

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::models::ClusterParams;
use crate::sim::linalg::C64;
use crate::sim::StateVector;
use crate::{Error, Result};

pub const CACHE_FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheKey {
    pub model: String,
    pub params: Vec<f64>,
    pub n: usize,
    pub seed: u64,
    pub tol: f64,
}

impl CacheKey {
    pub fn cluster(p: &ClusterParams, seed: u64, tol: f64) -> CacheKey {
        CacheKey { model: "cluster".into(), params: vec![p.j, p.h1, p.h2], n: p.n, seed, tol }
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("plain struct serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Header {
    format: u32,
    key: CacheKey,
    energy: f64,
    dim: usize,
}

#[derive(Clone, Debug)]
pub struct GroundStateCache {
    dir: PathBuf,
}

impl GroundStateCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<GroundStateCache> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(GroundStateCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.gs", &key.digest()[..32]))
    }

    pub fn store(&self, key: &CacheKey, energy: f64, state: &StateVector) -> Result<()> {
        let header = Header { format: CACHE_FORMAT, key: key.clone(), energy, dim: state.dim() };
        let tmp = self.path(key).with_extension("tmp");
        {
            let mut f = std::io::BufWriter::new(fs::File::create(&tmp)?);
            serde_json::to_writer(&mut f, &header)?;
            f.write_all(b"\n")?;
            for a in state.amplitudes() {
                f.write_all(&a.re.to_le_bytes())?;
                f.write_all(&a.im.to_le_bytes())?;
            }
            f.flush()?;
        }
        fs::rename(tmp, self.path(key))?;
        Ok(())
    }

    /// Cached entry for `key`, if present. A digest collision or a corrupt
    /// file is reported as an error rather than silently ignored.
    pub fn load(&self, key: &CacheKey) -> Result<Option<(f64, StateVector)>> {
        let path = self.path(key);
        if !path.exists() {
            return Ok(None);
        }
        let mut r = BufReader::new(fs::File::open(&path)?);
        let mut line = String::new();
        r.read_line(&mut line)?;
        let header: Header = serde_json::from_str(line.trim_end())?;
        if header.format != CACHE_FORMAT || header.key != *key {
            return Err(Error::Schema(format!("cache entry {} does not match its key", path.display())));
        }
        let mut bytes = Vec::with_capacity(16 * header.dim);
        r.read_to_end(&mut bytes)?;
        if bytes.len() != 16 * header.dim {
            return Err(Error::Schema(format!("cache entry {} is truncated", path.display())));
        }
        let amps = bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                C64::new(re, im)
            })
            .collect();
        Ok(Some((header.energy, StateVector::from_amplitudes(amps)?)))
    }

    /// Loads or computes and stores.
    pub fn get_or_compute<F>(&self, key: &CacheKey, compute: F) -> Result<(f64, StateVector)>
    where
        F: FnOnce() -> Result<(f64, StateVector)>,
    {
        if let Some(hit) = self.load(key)? {
            return Ok(hit);
        }
        let (e, s) = compute()?;
        self.store(key, e, &s)?;
        Ok((e, s))
    }
}
