//! Parallel kernel assembly with an on-disk cache keyed by a SHA-256 of
//! everything the entries depend on.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use hartree_core::radial_kernel::{
    ConvolutionOperator, KernelDiagnostics, KernelMatrix, NewtonPotential, QuadratureSettings, RadialConvolution,
    RadialGrid,
};
use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::artifacts::hex;
use crate::error::{LabError, Result};

const MAGIC: &[u8; 8] = b"HWKERN01";

/// Builds the dense kernel with one rayon task per row.
pub fn build_kernel_parallel(
    grid: Arc<RadialGrid>,
    n: u32,
    gamma: f64,
    settings: QuadratureSettings,
) -> Result<KernelMatrix> {
    let op = RadialConvolution::new(n, gamma, settings)?;
    let rows = grid.nodes().par_iter().map(|&r| op.row(&grid, r)).collect();
    Ok(KernelMatrix::from_rows(grid, n, gamma, settings, rows)?)
}

pub fn cache_key(grid: &RadialGrid, n: u32, gamma: f64, settings: &QuadratureSettings) -> String {
    let mut h = Sha256::new();
    h.update(b"hartree-kernel-v1");
    h.update(n.to_le_bytes());
    h.update(gamma.to_bits().to_le_bytes());
    h.update(serde_json::to_vec(settings).expect("settings serialize"));
    for x in grid.nodes() {
        h.update(x.to_bits().to_le_bytes());
    }
    for w in grid.weights() {
        h.update(w.to_bits().to_le_bytes());
    }
    hex(&h.finalize())
}

#[derive(Serialize, Deserialize)]
struct CacheHeader {
    n: u32,
    gamma: f64,
    size: usize,
    settings: QuadratureSettings,
    diagnostics: KernelDiagnostics,
}

/// Directory of cached kernel matrices.
#[derive(Debug, Clone)]
pub struct KernelCache {
    dir: PathBuf,
}

impl KernelCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn get_or_build(
        &self,
        grid: Arc<RadialGrid>,
        n: u32,
        gamma: f64,
        settings: QuadratureSettings,
    ) -> Result<KernelMatrix> {
        let key = cache_key(&grid, n, gamma, &settings);
        let path = self.dir.join(format!("{key}.hwkern"));
        if path.exists() {
            match load(&path, grid.clone()) {
                Ok(k) => {
                    debug!("kernel cache hit {}", path.display());
                    return Ok(k);
                }
                Err(e) => info!("ignoring unreadable cache entry {}: {e}", path.display()),
            }
        }
        let k = build_kernel_parallel(grid, n, gamma, settings)?;
        fs::create_dir_all(&self.dir).map_err(LabError::io(&self.dir))?;
        // write to a temporary name first so concurrent readers never see a torn file
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        store(&tmp, &k)?;
        fs::rename(&tmp, &path).map_err(LabError::io(&path))?;
        Ok(k)
    }
}

fn store(path: &Path, k: &KernelMatrix) -> Result<()> {
    let header = serde_json::to_vec(&CacheHeader {
        n: k.n(),
        gamma: k.gamma(),
        size: k.size(),
        settings: *k.settings(),
        diagnostics: *k.diagnostics(),
    })?;
    let mut bytes = Vec::with_capacity(12 + header.len() + 8 * k.entries().len());
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&(header.len() as u32).to_le_bytes());
    bytes.extend_from_slice(&header);
    for x in k.entries() {
        bytes.extend_from_slice(&x.to_le_bytes());
    }
    fs::write(path, bytes).map_err(LabError::io(path))
}

fn load(path: &Path, grid: Arc<RadialGrid>) -> Result<KernelMatrix> {
    let bytes = fs::read(path).map_err(LabError::io(path))?;
    let bad = || LabError::Snapshot(format!("{}: corrupt kernel cache entry", path.display()));
    if bytes.len() < 12 || &bytes[..8] != MAGIC {
        return Err(bad());
    }
    let len = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let header: CacheHeader = serde_json::from_slice(bytes.get(12..12 + len).ok_or_else(bad)?)?;
    let body = &bytes[12 + len..];
    if header.size != grid.len() || body.len() != 8 * header.size * header.size {
        return Err(bad());
    }
    let entries = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(KernelMatrix::from_parts(
        grid,
        header.n,
        header.gamma,
        header.settings,
        entries,
        header.diagnostics,
    )?)
}

/// The `O(N)` Newton potential for `n = 3, gamma = 1` on uniform linear
/// grids, otherwise the (cached, when `cache` is given) dense kernel.
pub fn operator_for(
    grid: Arc<RadialGrid>,
    n: u32,
    gamma: f64,
    cache: Option<&KernelCache>,
) -> Result<Box<dyn ConvolutionOperator>> {
    if n == 3 && gamma == 1.0 {
        if let Ok(op) = NewtonPotential::new(grid.clone()) {
            return Ok(Box::new(op));
        }
    }
    let settings = QuadratureSettings::default();
    let k = match cache {
        Some(c) => c.get_or_build(grid, n, gamma, settings)?,
        None => build_kernel_parallel(grid, n, gamma, settings)?,
    };
    Ok(Box::new(k))
}
