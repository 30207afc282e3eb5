//! Shared, lazily built inputs for the checks, with an optional on-disk cache
//! for the Golay code and the permutation groups.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use anyhow::{anyhow, bail, Context as _, Result};
use fermat_k3::mathieu::{m23_construct, m24_construct, GolayCode, INFINITY, M23_ORDER, M24_ORDER};
use fermat_k3::matrix_groups::{fermat, MatrixGroup};
use fermat_k3::perm::PermGroup;

type Slot<T> = OnceLock<std::result::Result<T, String>>;

pub struct Context {
    seed: u64,
    cache: Option<PathBuf>,
    code: Slot<GolayCode>,
    m24: Slot<PermGroup>,
    m23: Slot<PermGroup>,
    sylow: Slot<PermGroup>,
    f384_tilde: OnceLock<MatrixGroup>,
    f128: OnceLock<MatrixGroup>,
}

fn get<T>(slot: &Slot<T>, init: impl FnOnce() -> Result<T>) -> Result<&T> {
    slot.get_or_init(|| init().map_err(|e| format!("{e:#}"))).as_ref().map_err(|e| anyhow!("{e}"))
}

impl Context {
    pub fn new(seed: u64, cache: Option<PathBuf>) -> Self {
        Context {
            seed,
            cache,
            code: OnceLock::new(),
            m24: OnceLock::new(),
            m23: OnceLock::new(),
            sylow: OnceLock::new(),
            f384_tilde: OnceLock::new(),
            f128: OnceLock::new(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn code(&self) -> Result<&GolayCode> {
        get(&self.code, || {
            self.cached(
                "golay.hex",
                |text| Ok(GolayCode::from_hex_lines(text)?),
                GolayCode::to_hex_lines,
                || Ok(GolayCode::construct()),
            )
        })
    }

    pub fn m24(&self) -> Result<&PermGroup> {
        get(&self.m24, || {
            let code = self.code()?;
            self.cached(
                "m24.bsgs",
                |text| {
                    let g = PermGroup::from_text(text)?;
                    if g.order() != M24_ORDER || !g.generators().iter().all(|p| code.preserves_octads(p)) {
                        bail!("not the octad stabilizer");
                    }
                    Ok(g)
                },
                PermGroup::to_text,
                || Ok(m24_construct(code)?),
            )
        })
    }

    pub fn m23(&self) -> Result<&PermGroup> {
        get(&self.m23, || {
            let m24 = self.m24()?;
            self.cached(
                "m23.bsgs",
                |text| {
                    let g = PermGroup::from_text(text)?;
                    let fixes = g.generators().iter().all(|p| p.apply(INFINITY - 1) == INFINITY - 1);
                    if g.order() != M23_ORDER || !fixes || !g.generators().iter().all(|p| m24.contains(p)) {
                        bail!("not the point stabilizer");
                    }
                    Ok(g)
                },
                PermGroup::to_text,
                || Ok(m23_construct(m24)?),
            )
        })
    }

    /// A Sylow 2-subgroup of M23, chosen by the run seed.
    pub fn sylow(&self) -> Result<&PermGroup> {
        get(&self.sylow, || {
            let m23 = self.m23()?;
            self.cached(
                &format!("sylow2-m23-seed-{}.bsgs", self.seed),
                |text| {
                    let g = PermGroup::from_text(text)?;
                    if g.order() != 128 || !g.generators().iter().all(|p| m23.contains(p)) {
                        bail!("not a Sylow 2-subgroup of M23");
                    }
                    Ok(g)
                },
                PermGroup::to_text,
                || Ok(m23.sylow2(self.seed)?),
            )
        })
    }

    pub fn f384_tilde(&self) -> &MatrixGroup {
        self.f384_tilde.get_or_init(fermat::f384_tilde)
    }

    pub fn f128(&self) -> &MatrixGroup {
        self.f128.get_or_init(fermat::f128)
    }

    /// Loads `name` from the cache directory if it parses and validates,
    /// otherwise computes it and writes it back.
    fn cached<T>(
        &self,
        name: &str,
        parse: impl FnOnce(&str) -> Result<T>,
        render: impl FnOnce(&T) -> String,
        compute: impl FnOnce() -> Result<T>,
    ) -> Result<T> {
        let Some(dir) = &self.cache else {
            return compute();
        };
        let path = dir.join(name);
        if let Ok(text) = fs::read_to_string(&path) {
            match parse(&text) {
                Ok(value) => return Ok(value),
                Err(e) => eprintln!("cache: ignoring {} ({e:#}); recomputing", path.display()),
            }
        }
        let value = compute()?;
        write_atomic(dir, &path, &render(&value)).with_context(|| format!("writing {}", path.display()))?;
        Ok(value)
    }
}

/// Writes to a temporary file in `dir`, then renames it over `path`.
pub fn write_atomic(dir: &Path, path: &Path, contents: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path)?;
    Ok(())
}
