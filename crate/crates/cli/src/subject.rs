//! Resolving the group a command works on: a `.pcp` file, a family member
//! or a descendant-tree path.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use sigma3_core::descendants::DescendantOptions;
use sigma3_core::registry::{family_path, resolve_path};
use sigma3_core::{instantiate_family, parse_pcp, AutGroup, Family, FamilySpec, PcPresentation, TreePath};

/// Resource limits shared by all commands.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_order_exp: usize,
    pub max_class: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_order_exp: 20, max_class: 24 }
    }
}

impl Caps {
    pub fn check(&self, pc: &PcPresentation) -> sigma3_core::Result<()> {
        if pc.n() > self.max_order_exp {
            return Err(sigma3_core::Error::ResourceCap(format!(
                "order 3^{} exceeds the cap 3^{}",
                pc.n(),
                self.max_order_exp
            )));
        }
        if pc.p_class() > self.max_class {
            return Err(sigma3_core::Error::ResourceCap(format!(
                "p-class {} exceeds the cap {}",
                pc.p_class(),
                self.max_class
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum Subject {
    Pcp(PathBuf),
    Family(FamilySpec),
    Path(TreePath),
}

impl Subject {
    pub fn from_flags(
        pcp: Option<&Path>,
        family: Option<Family>,
        e: Option<u32>,
        path: Option<&TreePath>,
    ) -> anyhow::Result<Subject> {
        let given = pcp.is_some() as u8 + family.is_some() as u8 + path.is_some() as u8;
        if given != 1 {
            bail!("exactly one of --pcp, --family or --path is required");
        }
        if let Some(p) = pcp {
            return Ok(Subject::Pcp(p.to_path_buf()));
        }
        if let Some(f) = family {
            let e = e.context("--family needs --e")?;
            return Ok(Subject::Family(FamilySpec::new(f, e)?));
        }
        Ok(Subject::Path(path.cloned().unwrap()))
    }

    pub fn label(&self) -> String {
        match self {
            Subject::Pcp(p) => p.display().to_string(),
            Subject::Family(s) => format!("{}({})", s.family, s.e),
            Subject::Path(p) => p.to_string(),
        }
    }
}

/// A group ready for computation.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub label: String,
    pub path: Option<TreePath>,
    pub pc: PcPresentation,
    pub aut: Option<AutGroup>,
}

pub fn resolve(subject: &Subject, caps: Caps) -> anyhow::Result<Resolved> {
    let label = subject.label();
    let resolved = match subject {
        Subject::Pcp(file) => {
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let pc = parse_pcp(&text)?;
            let v = sigma3_core::check_consistency(&pc);
            if let Some(first) = v.first() {
                return Err(sigma3_core::Error::Inconsistent(format!("{}: {first}", file.display())).into());
            }
            Resolved { label, path: None, pc, aut: None }
        }
        Subject::Family(spec) => {
            let pc = instantiate_family(*spec)?;
            Resolved { label, path: family_path(spec.family, spec.e), pc, aut: None }
        }
        Subject::Path(p) => {
            let r = resolve_path(p, DescendantOptions::default())?;
            Resolved { label, path: Some(p.clone()), pc: r.pc, aut: r.aut }
        }
    };
    caps.check(&resolved.pc)?;
    Ok(resolved)
}
