//! Binary field snapshots.
//!
//! Layout (all little-endian): the magic `HWSNAP01`, a `u32` header length,
//! a UTF-8 JSON [`SnapshotHeader`], then the grid nodes as `f64`, then
//! `levels` blocks of `nodes` values each.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use hartree_core::radial_kernel::RadialGrid;
use hartree_core::wave_rep::SpaceTimeField;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub const MAGIC: &[u8; 8] = b"HWSNAP01";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub nodes: usize,
    pub levels: usize,
    pub t0: f64,
    pub dt: f64,
    /// Uniform spacing of the grid (the only layout snapshots are taken on).
    pub dr: f64,
    /// Free-form description (unknown, formulation, ...).
    pub label: String,
}

pub fn write_snapshot(path: &Path, field: &SpaceTimeField, label: &str) -> Result<()> {
    let grid = field.grid();
    let dr = grid
        .dr()
        .ok_or_else(|| LabError::Snapshot("snapshots need a uniform grid".into()))?;
    let header = SnapshotHeader {
        nodes: grid.len(),
        levels: field.levels().len(),
        t0: field.t0(),
        dt: field.dt(),
        dr,
        label: label.to_string(),
    };
    let json = serde_json::to_vec(&header)?;
    let file = File::create(path).map_err(LabError::io(path))?;
    let mut w = BufWriter::new(file);
    let mut put = |bytes: &[u8]| w.write_all(bytes).map_err(LabError::io(path));
    put(MAGIC)?;
    put(&(json.len() as u32).to_le_bytes())?;
    put(&json)?;
    for &x in grid.nodes() {
        put(&x.to_le_bytes())?;
    }
    for level in field.levels() {
        for &x in level {
            put(&x.to_le_bytes())?;
        }
    }
    w.flush().map_err(LabError::io(path))
}

pub fn read_snapshot(path: &Path) -> Result<(SnapshotHeader, SpaceTimeField)> {
    let file = File::open(path).map_err(LabError::io(path))?;
    let mut r = BufReader::new(file);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(LabError::io(path))?;
    if &magic != MAGIC {
        return Err(LabError::Snapshot(format!("{}: wrong magic", path.display())));
    }
    let mut len = [0u8; 4];
    r.read_exact(&mut len).map_err(LabError::io(path))?;
    let mut json = vec![0u8; u32::from_le_bytes(len) as usize];
    r.read_exact(&mut json).map_err(LabError::io(path))?;
    let header: SnapshotHeader = serde_json::from_slice(&json)?;
    let mut read_block = |count: usize| -> Result<Vec<f64>> {
        let mut bytes = vec![0u8; 8 * count];
        r.read_exact(&mut bytes).map_err(LabError::io(path))?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    };
    let nodes = read_block(header.nodes)?;
    let grid = RadialGrid::uniform(header.dr, nodes[nodes.len() - 1], 1)?;
    if grid.nodes() != nodes.as_slice() {
        return Err(LabError::Snapshot("stored nodes do not form the uniform grid".into()));
    }
    let levels = (0..header.levels)
        .map(|_| read_block(header.nodes))
        .collect::<Result<Vec<_>>>()?;
    let field = SpaceTimeField::from_levels(Arc::new(grid), header.t0, header.dt, levels)?;
    Ok((header, field))
}
