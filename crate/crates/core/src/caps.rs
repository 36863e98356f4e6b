//! Desk-scale size caps. Defaults can be overridden once per process (the CLI reads an
//! optional `FWSETS_CAPS` variable, e.g. `dim=12,rows=96,pieces=14`).

use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Ambient dimension.
    pub dim: usize,
    /// Generators or constraint rows of a single representation.
    pub rows: usize,
    /// Generator count `p` of a cone in the value-function routines (2^p subsets).
    pub pieces: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            dim: 10,
            rows: 64,
            pieces: 12,
        }
    }
}

impl Caps {
    pub fn parse(spec: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad cap override {item:?}")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad cap value {item:?}")))?;
            match k.trim() {
                "dim" => caps.dim = v,
                "rows" => caps.rows = v,
                "pieces" => caps.pieces = v,
                other => return Err(Error::Parse(format!("unknown cap {other:?}"))),
            }
        }
        Ok(caps)
    }
}

static CAPS: OnceLock<Caps> = OnceLock::new();

/// Installs process-wide caps. Returns false if caps were already fixed.
pub fn set_caps(caps: Caps) -> bool {
    CAPS.set(caps).is_ok()
}

pub fn caps() -> Caps {
    *CAPS.get_or_init(Caps::default)
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    let cap = caps().dim;
    if n > cap {
        return Err(Error::SizeCap {
            what: "dimension",
            got: n,
            cap,
        });
    }
    Ok(())
}

pub(crate) fn check_rows(what: &'static str, m: usize) -> Result<()> {
    let cap = caps().rows;
    if m > cap {
        return Err(Error::SizeCap { what, got: m, cap });
    }
    Ok(())
}

pub(crate) fn check_pieces(p: usize) -> Result<()> {
    let cap = caps().pieces;
    if p > cap {
        return Err(Error::SizeCap {
            what: "cone generators",
            got: p,
            cap,
        });
    }
    Ok(())
}
