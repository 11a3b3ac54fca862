//! The group report: structure, Artin pattern, σ-test and descendant
//! counts of one group.

use std::time::Instant;

use serde::Serialize;
use sigma3_core::abelian::{format_quartet, pc_abelian_type};
use sigma3_core::artin::{artin_pattern_with, sigma_schur_test, ArtinPattern};
use sigma3_core::descendants::DescendantOptions;
use sigma3_core::{
    automorphism_group, immediate_descendants, p_cover, structure_summary, AbelianType, Collector, Error,
};

use crate::subject::{Caps, Resolved};

#[derive(Clone, Debug, Serialize)]
pub struct KappaReport {
    pub raw: String,
    pub canonical: String,
    pub name: Option<&'static str>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Bracket {
    /// Type of the maximal subgroup.
    pub subgroup: String,
    /// Types of its own maximal subgroups, with multiplicities.
    pub layer: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepCount {
    pub step: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "C")]
    pub c: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub subject: String,
    pub path: Option<String>,
    pub lo: usize,
    pub p_class: usize,
    pub cl: usize,
    pub sl: usize,
    pub abelianization: String,
    pub lower_central_factors: Vec<String>,
    pub bcf: bool,
    pub kappa: Option<KappaReport>,
    pub rho: Option<String>,
    pub alpha1: Option<String>,
    pub alpha2: Option<Vec<Bracket>>,
    pub sigma: Option<bool>,
    pub schur: Option<bool>,
    pub d: usize,
    pub r: usize,
    pub nu: usize,
    pub descendants: Vec<StepCount>,
    /// Why the Artin pattern is missing, if it is.
    pub note: Option<String>,
    pub provenance: Provenance,
}

/// Render a multiset of types as `52111,(6111)^3,(62)^9`: ascending
/// multiplicity, larger types first among equal multiplicities.
pub fn format_multiset(types: &[AbelianType]) -> String {
    let mut groups: Vec<(AbelianType, usize)> = Vec::new();
    for t in types {
        match groups.iter_mut().find(|(u, _)| u == t) {
            Some(g) => g.1 += 1,
            None => groups.push((t.clone(), 1)),
        }
    }
    groups.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)));
    groups
        .iter()
        .map(|(t, k)| if *k == 1 { t.to_string() } else { format!("({t})^{k}") })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn brackets(p: &ArtinPattern) -> Option<Vec<Bracket>> {
    let a2 = p.alpha2.as_ref()?;
    Some(
        p.alpha1
            .iter()
            .zip(a2)
            .map(|(h, layer)| Bracket { subgroup: h.to_string(), layer: format_multiset(layer) })
            .collect(),
    )
}

pub fn format_rho(rho: &[usize; 4]) -> String {
    format!("({},{},{};{})", rho[0], rho[1], rho[2], rho[3])
}

/// Build the report. `steps` lists the step sizes for which N and C are
/// counted.
pub fn build_report(
    g: &Resolved,
    depth: u32,
    steps: &[usize],
    caps: Caps,
    seed: Option<u64>,
) -> anyhow::Result<Report> {
    let start = Instant::now();
    let col = Collector::new(&g.pc);
    let st = structure_summary(&col);
    let cd = p_cover(&g.pc)?;
    let mut note = None;
    let pattern = if depth >= 1 {
        match artin_pattern_with(&col, depth) {
            Ok(p) => Some(p),
            Err(Error::Unsupported(m)) => {
                note = Some(m);
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let aut = match (&g.aut, pattern.is_some() || !steps.is_empty()) {
        (Some(a), _) => Some(a.clone()),
        (None, true) => Some(automorphism_group(&g.pc)?),
        (None, false) => None,
    };
    let sigma = match (&pattern, &aut) {
        (Some(_), Some(a)) => Some(sigma_schur_test(&g.pc, Some(a))?),
        _ => None,
    };
    let mut descendants = Vec::new();
    for &s in steps {
        if g.pc.n() + s > caps.max_order_exp {
            return Err(Error::ResourceCap(format!(
                "descendants of order 3^{} exceed the cap 3^{}",
                g.pc.n() + s,
                caps.max_order_exp
            ))
            .into());
        }
        if s > cd.nu() {
            descendants.push(StepCount { step: s, n: 0, c: 0 });
            continue;
        }
        let rep = immediate_descendants(
            &g.pc,
            aut.as_ref().unwrap(),
            s,
            DescendantOptions { with_automorphisms: false, ..Default::default() },
        )?;
        descendants.push(StepCount { step: s, n: rep.total(), c: rep.capable() });
    }
    Ok(Report {
        subject: g.label.clone(),
        path: g.path.as_ref().map(|p| p.to_string()),
        lo: st.lo,
        p_class: st.p_class,
        cl: st.cl,
        sl: st.sl,
        abelianization: pc_abelian_type(&g.pc).to_string(),
        lower_central_factors: st.lower_central_factors.iter().map(|t| t.to_string()).collect(),
        bcf: st.bcf,
        kappa: pattern.as_ref().map(|p| KappaReport {
            raw: p.kappa.to_string(),
            canonical: p.kappa_canonical.to_string(),
            name: p.kappa_name,
        }),
        rho: pattern.as_ref().map(|p| format_rho(&p.rho)),
        alpha1: pattern.as_ref().map(|p| format_quartet(&p.alpha1)),
        alpha2: pattern.as_ref().and_then(brackets),
        sigma: sigma.as_ref().map(|s| s.sigma),
        schur: sigma.as_ref().map(|s| s.schur),
        d: g.pc.d(),
        r: cd.r,
        nu: cd.nu(),
        descendants,
        note,
        provenance: Provenance {
            tool: "sigma3",
            version: env!("CARGO_PKG_VERSION"),
            seed,
            elapsed_ms: start.elapsed().as_millis(),
        },
    })
}

impl Report {
    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k:<14}{v}\n"));
        line("subject", self.subject.clone());
        if let Some(p) = &self.path {
            line("path", p.clone());
        }
        line("order", format!("3^{}", self.lo));
        line("p-class", self.p_class.to_string());
        line("class", self.cl.to_string());
        line("derived len", self.sl.to_string());
        line("G/G'", self.abelianization.clone());
        line("lcs factors", self.lower_central_factors.join(", "));
        line("bcf", self.bcf.to_string());
        if let Some(k) = &self.kappa {
            let name = k.name.map(|n| format!(" {n}")).unwrap_or_default();
            line("kappa", format!("{} ~ {}{}", k.raw, k.canonical, name));
        }
        if let Some(r) = &self.rho {
            line("rho", r.clone());
        }
        if let Some(a) = &self.alpha1 {
            line("alpha1", a.clone());
        }
        if let Some(b) = &self.alpha2 {
            for (i, br) in b.iter().enumerate() {
                line(&format!("alpha2 H{}", i + 1), format!("[{}; {}]", br.subgroup, br.layer));
            }
        }
        if let (Some(s), Some(t)) = (self.sigma, self.schur) {
            line("sigma", s.to_string());
            line("schur sigma", t.to_string());
        }
        line("d, r, nu", format!("{}, {}, {}", self.d, self.r, self.nu));
        for s in &self.descendants {
            line(&format!("step {}", s.step), format!("N={} C={}", s.n, s.c));
        }
        if let Some(n) = &self.note {
            line("note", n.clone());
        }
        out
    }
}
