//! Problem instances: chain Hamiltonians, Lindblad operators, JSON configs.
//!
//! Sites are numbered `1..=l` and site 1 is the leftmost tensor factor.

use std::collections::BTreeSet;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::operators::{Operator, C64, ONE, ZERO};

/// Chain length and local dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub l: usize,
    pub d0: usize,
}

impl Lattice {
    pub fn dim(&self) -> usize {
        self.d0.pow(self.l as u32)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TermSpec {
    Named {
        term: String,
        coupling: f64,
        sites: Vec<usize>,
    },
    /// Row-major matrix on the listed sites.
    Custom {
        matrix: Vec<C64>,
        coupling: f64,
        sites: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum DissipatorSpec {
    Named {
        op: String,
        site: usize,
        strength: f64,
    },
    Custom {
        matrix: Vec<C64>,
        site: usize,
        strength: f64,
    },
}

impl DissipatorSpec {
    pub fn site(&self) -> usize {
        match self {
            Self::Named { site, .. } | Self::Custom { site, .. } => *site,
        }
    }

    pub fn strength(&self) -> f64 {
        match self {
            Self::Named { strength, .. } | Self::Custom { strength, .. } => *strength,
        }
    }
}

/// Declarative model description; the JSON config maps onto it one to one.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub lattice: Lattice,
    pub hamiltonian: Vec<TermSpec>,
    pub dissipators: Vec<DissipatorSpec>,
    pub gamma: f64,
}

impl ModelConfig {
    pub fn new(l: usize, d0: usize) -> Self {
        Self {
            lattice: Lattice { l, d0 },
            hamiltonian: Vec::new(),
            dissipators: Vec::new(),
            gamma: 1.0,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_term(mut self, term: &str, coupling: f64, sites: &[usize]) -> Self {
        self.hamiltonian.push(TermSpec::Named {
            term: term.to_string(),
            coupling,
            sites: sites.to_vec(),
        });
        self
    }

    pub fn with_dissipator(mut self, op: &str, site: usize, strength: f64) -> Self {
        self.dissipators.push(DissipatorSpec::Named {
            op: op.to_string(),
            site,
            strength,
        });
        self
    }

    /// Nearest-neighbour two-site term on every bond.
    pub fn with_bond_term(mut self, term: &str, coupling: f64) -> Self {
        for i in 1..self.lattice.l {
            self = self.with_term(term, coupling, &[i, i + 1]);
        }
        self
    }

    /// Single-site term on every site.
    pub fn with_field(self, term: &str, coupling: f64) -> Self {
        let sites: Vec<usize> = (1..=self.lattice.l).collect();
        self.with_term(term, coupling, &sites)
    }

    pub fn validate(&self) -> Result<()> {
        let Lattice { l, d0 } = self.lattice;
        if l == 0 {
            return Err(Error::schema("/lattice/l", "must be at least 1"));
        }
        if d0 < 2 {
            return Err(Error::schema("/lattice/d0", "must be at least 2"));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::schema("/gamma", "must be a finite nonnegative number"));
        }
        for (k, t) in self.hamiltonian.iter().enumerate() {
            let (coupling, sites) = match t {
                TermSpec::Named { coupling, sites, .. } | TermSpec::Custom { coupling, sites, .. } => {
                    (coupling, sites)
                }
            };
            if !coupling.is_finite() {
                return Err(Error::schema(format!("/hamiltonian/{k}/coupling"), "must be finite"));
            }
            check_sites(sites, l)?;
        }
        for (k, d) in self.dissipators.iter().enumerate() {
            let s = d.strength();
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::schema(
                    format!("/dissipators/{k}/strength"),
                    "must be a finite nonnegative number",
                ));
            }
            check_sites(&[d.site()], l)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .hamiltonian
            .iter()
            .map(|t| match t {
                TermSpec::Named { term, coupling, sites } => {
                    json!({"term": term, "coupling": coupling, "sites": sites})
                }
                TermSpec::Custom { matrix, coupling, sites } => json!({
                    "term": "custom",
                    "matrix": matrix_to_json(matrix),
                    "coupling": coupling,
                    "sites": sites,
                }),
            })
            .collect();
        let dissipators: Vec<Value> = self
            .dissipators
            .iter()
            .map(|d| match d {
                DissipatorSpec::Named { op, site, strength } => {
                    json!({"op": op, "site": site, "strength": strength})
                }
                DissipatorSpec::Custom { matrix, site, strength } => json!({
                    "op": "custom",
                    "matrix": matrix_to_json(matrix),
                    "site": site,
                    "strength": strength,
                }),
            })
            .collect();
        json!({
            "lattice": {"l": self.lattice.l, "d0": self.lattice.d0},
            "hamiltonian": terms,
            "dissipators": dissipators,
            "gamma": self.gamma,
        })
    }

    /// Re-target a template to chain length `l`.
    ///
    /// A term family that covers every site (or every bond) of the template is
    /// replicated on the new chain; otherwise site 1 stays at 1, the last
    /// site moves to the new last site and interior sites keep their index.
    /// Templates need at least three sites so edges and bulk are distinct.
    pub fn resized(&self, l: usize) -> Result<Self> {
        let l0 = self.lattice.l;
        if l0 < 3 {
            return Err(Error::schema("/lattice/l", "size-scan templates need l >= 3"));
        }
        if l == 0 {
            return Err(Error::InvalidArgument("chain length must be positive".into()));
        }
        let remap = |s: usize| -> Result<usize> {
            let t = if s == l0 { l } else { s };
            if t > l || (s != 1 && s != l0 && s >= l) {
                return Err(Error::InvalidArgument(format!(
                    "interior template site {s} does not fit a chain of length {l}"
                )));
            }
            Ok(t)
        };

        let mut hamiltonian = Vec::new();
        let mut done = vec![false; self.hamiltonian.len()];
        for k in 0..self.hamiltonian.len() {
            if done[k] {
                continue;
            }
            let family: Vec<usize> = (k..self.hamiltonian.len())
                .filter(|&j| !done[j] && same_family(&self.hamiltonian[k], &self.hamiltonian[j]))
                .collect();
            let site_sets: Vec<&Vec<usize>> = family.iter().map(|&j| term_sites(&self.hamiltonian[j])).collect();
            let arity = term_arity(&self.hamiltonian[k]);
            let covered: BTreeSet<Vec<usize>> = if arity == 1 {
                site_sets.iter().flat_map(|s| s.iter().map(|&x| vec![x])).collect()
            } else {
                site_sets.iter().map(|s| (*s).clone()).collect()
            };
            let uniform = if arity == 1 {
                (1..=l0).all(|s| covered.contains(&vec![s]))
            } else if arity == 2 {
                (1..l0).all(|s| covered.contains(&vec![s, s + 1]))
            } else {
                false
            };
            if uniform {
                if arity == 1 {
                    let sites: Vec<usize> = (1..=l).collect();
                    hamiltonian.push(with_sites(&self.hamiltonian[k], sites));
                } else {
                    for s in 1..l {
                        hamiltonian.push(with_sites(&self.hamiltonian[k], vec![s, s + 1]));
                    }
                }
            } else {
                for &j in &family {
                    let sites = term_sites(&self.hamiltonian[j])
                        .iter()
                        .map(|&s| remap(s))
                        .collect::<Result<Vec<_>>>()?;
                    let distinct: BTreeSet<_> = sites.iter().collect();
                    if distinct.len() == sites.len() {
                        hamiltonian.push(with_sites(&self.hamiltonian[j], sites));
                    }
                }
            }
            for j in family {
                done[j] = true;
            }
        }

        let mut dissipators = Vec::new();
        let mut done = vec![false; self.dissipators.len()];
        for k in 0..self.dissipators.len() {
            if done[k] {
                continue;
            }
            let family: Vec<usize> = (k..self.dissipators.len())
                .filter(|&j| !done[j] && same_dissipator_family(&self.dissipators[k], &self.dissipators[j]))
                .collect();
            let covered: BTreeSet<usize> = family.iter().map(|&j| self.dissipators[j].site()).collect();
            if (1..=l0).all(|s| covered.contains(&s)) {
                for s in 1..=l {
                    dissipators.push(with_site(&self.dissipators[k], s));
                }
            } else {
                let mut placed = BTreeSet::new();
                for &j in &family {
                    let s = remap(self.dissipators[j].site())?;
                    if placed.insert(s) {
                        dissipators.push(with_site(&self.dissipators[j], s));
                    }
                }
            }
            for j in family {
                done[j] = true;
            }
        }

        Ok(Self {
            lattice: Lattice { l, d0: self.lattice.d0 },
            hamiltonian,
            dissipators,
            gamma: self.gamma,
        })
    }
}

fn term_sites(t: &TermSpec) -> &Vec<usize> {
    match t {
        TermSpec::Named { sites, .. } | TermSpec::Custom { sites, .. } => sites,
    }
}

fn term_arity(t: &TermSpec) -> usize {
    match t {
        TermSpec::Named { term, .. } => {
            if TWO_SITE_TERMS.contains(&term.as_str()) {
                2
            } else {
                1
            }
        }
        TermSpec::Custom { sites, .. } => sites.len(),
    }
}

fn same_family(a: &TermSpec, b: &TermSpec) -> bool {
    match (a, b) {
        (
            TermSpec::Named { term: ta, coupling: ca, .. },
            TermSpec::Named { term: tb, coupling: cb, .. },
        ) => ta == tb && ca == cb,
        (
            TermSpec::Custom { matrix: ma, coupling: ca, sites: sa },
            TermSpec::Custom { matrix: mb, coupling: cb, sites: sb },
        ) => ma == mb && ca == cb && sa.len() == sb.len(),
        _ => false,
    }
}

fn same_dissipator_family(a: &DissipatorSpec, b: &DissipatorSpec) -> bool {
    match (a, b) {
        (
            DissipatorSpec::Named { op: oa, strength: sa, .. },
            DissipatorSpec::Named { op: ob, strength: sb, .. },
        ) => oa == ob && sa == sb,
        (
            DissipatorSpec::Custom { matrix: ma, strength: sa, .. },
            DissipatorSpec::Custom { matrix: mb, strength: sb, .. },
        ) => ma == mb && sa == sb,
        _ => false,
    }
}

fn with_sites(t: &TermSpec, new_sites: Vec<usize>) -> TermSpec {
    let mut t = t.clone();
    match &mut t {
        TermSpec::Named { sites, .. } | TermSpec::Custom { sites, .. } => *sites = new_sites,
    }
    t
}

fn with_site(d: &DissipatorSpec, s: usize) -> DissipatorSpec {
    let mut d = d.clone();
    match &mut d {
        DissipatorSpec::Named { site, .. } | DissipatorSpec::Custom { site, .. } => *site = s,
    }
    d
}

fn check_sites(sites: &[usize], l: usize) -> Result<()> {
    for &site in sites {
        if site == 0 || site > l {
            return Err(Error::SiteOutOfRange { site, l });
        }
    }
    Ok(())
}

fn matrix_to_json(m: &[C64]) -> Value {
    Value::Array(m.iter().map(|z| json!([z.re, z.im])).collect())
}

const TWO_SITE_TERMS: [&str; 4] = ["xx", "yy", "zz", "hop"];
const SINGLE_SITE_TERMS: [&str; 5] = ["x", "y", "z", "number", "flip"];

/// Named single-site operator on a `d0`-level site.
///
/// `x`, `y`, `z`, `sigma_minus` and `sigma_plus` need `d0 = 2`;
/// `number`, `lower`, `raise` and `flip` work for any `d0`.
pub fn local_operator(name: &str, d0: usize) -> Result<Operator> {
    let qubit_only = |op: Operator| {
        if d0 == 2 {
            Ok(op)
        } else {
            Err(Error::UnknownOperator(format!("{name} (defined for d0 = 2 only)")))
        }
    };
    let lower = Operator::from_fn(d0, |m, n| if n == m + 1 { ONE } else { ZERO });
    match name {
        "x" => qubit_only(Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])),
        "y" => qubit_only(Operator::from_fn(2, |m, n| match (m, n) {
            (0, 1) => C64::new(0.0, -1.0),
            (1, 0) => C64::new(0.0, 1.0),
            _ => ZERO,
        })),
        "z" => qubit_only(Operator::diag(&[1.0, -1.0])),
        "sigma_minus" => qubit_only(Operator::matrix_unit(2, 0, 1)),
        "sigma_plus" => qubit_only(Operator::matrix_unit(2, 1, 0)),
        "number" => Ok(Operator::diag(&(0..d0).map(|k| k as f64).collect::<Vec<_>>())),
        "lower" => Ok(lower),
        "raise" => Ok(lower.adjoint()),
        "flip" => Ok(&lower + &lower.adjoint()),
        other => Err(Error::UnknownOperator(other.to_string())),
    }
}

/// Embed an operator acting on `sites` (in the listed order) into the chain.
pub fn embed(local: &Operator, sites: &[usize], lattice: Lattice) -> Result<Operator> {
    let Lattice { l, d0 } = lattice;
    check_sites(sites, l)?;
    let k = sites.len();
    if local.dim() != d0.pow(k as u32) {
        return Err(Error::DimMismatch {
            left: local.dim(),
            right: d0.pow(k as u32),
        });
    }
    let distinct: BTreeSet<_> = sites.iter().collect();
    if distinct.len() != k {
        return Err(Error::InvalidArgument(format!("repeated site in {sites:?}")));
    }
    let n = lattice.dim();
    // stride of site s (1-based) in the full index
    let stride = |s: usize| d0.pow((l - s) as u32);
    let strides: Vec<usize> = sites.iter().map(|&s| stride(s)).collect();
    let local_index = |full: usize| -> usize {
        strides.iter().fold(0, |acc, &st| acc * d0 + (full / st) % d0)
    };
    let clear = |full: usize| -> usize {
        strides.iter().fold(full, |acc, &st| acc - ((acc / st) % d0) * st)
    };
    let local_dim = local.dim();
    let mut out = Operator::zeros(n);
    for row in 0..n {
        let a = local_index(row);
        let base = clear(row);
        for b in 0..local_dim {
            let x = local[(a, b)];
            if x == ZERO {
                continue;
            }
            let mut col = base;
            let mut rem = b;
            for &st in strides.iter().rev() {
                col += (rem % d0) * st;
                rem /= d0;
            }
            out[(row, col)] = x;
        }
    }
    Ok(out)
}

fn named_term_local(term: &str, d0: usize) -> Result<Operator> {
    if SINGLE_SITE_TERMS.contains(&term) {
        return local_operator(term, d0).map_err(|_| Error::UnknownTerm(format!("{term} (d0 = {d0})")));
    }
    let pair = |a: &str| -> Result<Operator> {
        let op = local_operator(a, d0).map_err(|_| Error::UnknownTerm(format!("{term} (d0 = {d0})")))?;
        crate::operators::kron(&op, &op)
    };
    match term {
        "xx" => pair("x"),
        "yy" => pair("y"),
        "zz" => pair("z"),
        "hop" => {
            let lo = local_operator("lower", d0)?;
            let up = lo.adjoint();
            Ok(&crate::operators::kron(&up, &lo)? + &crate::operators::kron(&lo, &up)?)
        }
        other => Err(Error::UnknownTerm(other.to_string())),
    }
}

fn custom_matrix(matrix: &[C64], pointer: &str) -> Result<Operator> {
    let dim = (matrix.len() as f64).sqrt().round() as usize;
    if dim == 0 || dim * dim != matrix.len() {
        return Err(Error::schema(pointer, "custom matrix must have a square number of entries"));
    }
    Operator::new(dim, matrix.to_vec())
}

/// Sum of all configured terms, each padded with identities.
pub fn build_hamiltonian(cfg: &ModelConfig) -> Result<Operator> {
    cfg.validate()?;
    let lattice = cfg.lattice;
    let mut h = Operator::zeros(lattice.dim());
    for (k, t) in cfg.hamiltonian.iter().enumerate() {
        let term = match t {
            TermSpec::Named { term, coupling, sites } => {
                let local = named_term_local(term, lattice.d0)?;
                let arity = if TWO_SITE_TERMS.contains(&term.as_str()) { 2 } else { 1 };
                if arity == 2 {
                    if sites.len() != 2 {
                        return Err(Error::schema(
                            format!("/hamiltonian/{k}/sites"),
                            format!("`{term}` needs exactly two sites"),
                        ));
                    }
                    embed(&local, sites, lattice)?.scale_real(*coupling)
                } else {
                    if sites.is_empty() {
                        return Err(Error::schema(format!("/hamiltonian/{k}/sites"), "empty site list"));
                    }
                    let mut acc = Operator::zeros(lattice.dim());
                    for &s in sites {
                        acc = &acc + &embed(&local, &[s], lattice)?;
                    }
                    acc.scale_real(*coupling)
                }
            }
            TermSpec::Custom { matrix, coupling, sites } => {
                let pointer = format!("/hamiltonian/{k}/matrix");
                let local = custom_matrix(matrix, &pointer)?;
                if local.ensure_hermitian().is_err() {
                    return Err(Error::schema(pointer, "Hamiltonian matrix must be Hermitian"));
                }
                embed(&local, sites, lattice)
                    .map_err(|e| match e {
                        Error::DimMismatch { .. } => Error::schema(pointer.clone(), "matrix size does not match sites"),
                        e => e,
                    })?
                    .scale_real(*coupling)
            }
        };
        h = &h + &term;
    }
    h.ensure_hermitian()?;
    Ok(h)
}

/// One Lindblad operator embedded in the full space.
#[derive(Clone, Debug)]
pub struct Dissipator {
    pub label: String,
    pub sites: Vec<usize>,
    pub strength: f64,
    pub op: Operator,
}

pub fn build_dissipators(cfg: &ModelConfig) -> Result<Vec<Dissipator>> {
    cfg.validate()?;
    let lattice = cfg.lattice;
    cfg.dissipators
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let (label, local) = match d {
                DissipatorSpec::Named { op, .. } => (op.clone(), local_operator(op, lattice.d0)?),
                DissipatorSpec::Custom { matrix, .. } => {
                    let pointer = format!("/dissipators/{k}/matrix");
                    let m = custom_matrix(matrix, &pointer)?;
                    if m.dim() != lattice.d0 {
                        return Err(Error::schema(pointer, "custom dissipator must be d0 x d0"));
                    }
                    ("custom".to_string(), m)
                }
            };
            Ok(Dissipator {
                label,
                sites: vec![d.site()],
                strength: d.strength(),
                op: embed(&local, &[d.site()], lattice)?,
            })
        })
        .collect()
}

/// The embedded Lindblad operators, without strengths.
pub fn build_lindblads(cfg: &ModelConfig) -> Result<Vec<Operator>> {
    Ok(build_dissipators(cfg)?.into_iter().map(|d| d.op).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Boundary,
    Bulk,
    Custom,
}

/// A fully built open-system instance.
#[derive(Clone, Debug)]
pub struct SystemModel {
    pub lattice: Lattice,
    pub hamiltonian: Operator,
    pub dissipators: Vec<Dissipator>,
    pub gamma: f64,
}

impl SystemModel {
    pub fn new(lattice: Lattice, hamiltonian: Operator, dissipators: Vec<Dissipator>, gamma: f64) -> Result<Self> {
        let n = lattice.dim();
        if hamiltonian.dim() != n {
            return Err(Error::DimMismatch {
                left: hamiltonian.dim(),
                right: n,
            });
        }
        hamiltonian.ensure_hermitian()?;
        for d in &dissipators {
            if d.op.dim() != n {
                return Err(Error::DimMismatch {
                    left: d.op.dim(),
                    right: n,
                });
            }
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidArgument(format!("gamma = {gamma}")));
        }
        Ok(Self {
            lattice,
            hamiltonian,
            dissipators,
            gamma,
        })
    }

    /// Unstructured `N`-level model: a single "site" of dimension `N`.
    pub fn from_operators(hamiltonian: Operator, lindblads: Vec<Operator>, gamma: f64) -> Result<Self> {
        let n = hamiltonian.dim();
        let dissipators = lindblads
            .into_iter()
            .map(|op| Dissipator {
                label: "custom".into(),
                sites: vec![1],
                strength: 1.0,
                op,
            })
            .collect();
        Self::new(Lattice { l: 1, d0: n }, hamiltonian, dissipators, gamma)
    }

    pub fn from_config(cfg: &ModelConfig) -> Result<Self> {
        Self::new(cfg.lattice, build_hamiltonian(cfg)?, build_dissipators(cfg)?, cfg.gamma)
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// `γ · strength` for dissipator `k`.
    pub fn rate(&self, k: usize) -> f64 {
        self.gamma * self.dissipators[k].strength
    }

    pub fn geometry(&self) -> Geometry {
        if self.dissipators.is_empty() {
            return Geometry::Custom;
        }
        let l = self.lattice.l;
        if l >= 3 && self.covers_every_site() {
            Geometry::Bulk
        } else if self.is_boundary_supported() {
            Geometry::Boundary
        } else if self.covers_every_site() {
            Geometry::Bulk
        } else {
            Geometry::Custom
        }
    }

    /// Every dissipator is declared on site 1 or site `l` and acts trivially
    /// everywhere else.
    pub fn is_boundary_supported(&self) -> bool {
        let l = self.lattice.l;
        !self.dissipators.is_empty()
            && self.dissipators.iter().all(|d| {
                d.sites.iter().all(|&s| s == 1 || s == l) && acts_only_on(&d.op, &d.sites, self.lattice)
            })
    }

    pub fn covers_every_site(&self) -> bool {
        let covered: BTreeSet<usize> = self.dissipators.iter().flat_map(|d| d.sites.iter().copied()).collect();
        (1..=self.lattice.l).all(|s| covered.contains(&s))
    }

    /// All Lindblad operators Hermitian and pairwise commuting.
    pub fn has_commuting_hermitian_lindblads(&self) -> bool {
        let scale = self.dissipators.iter().map(|d| d.op.max_abs()).fold(1.0, f64::max);
        self.dissipators.iter().all(|d| d.op.is_hermitian())
            && self.dissipators.iter().enumerate().all(|(i, a)| {
                self.dissipators[i + 1..]
                    .iter()
                    .all(|b| a.op.commutator(&b.op).max_abs() <= 1e-12 * scale * scale)
            })
    }
}

/// True when `op` commutes with every matrix unit on every site outside `support`.
pub fn acts_only_on(op: &Operator, support: &[usize], lattice: Lattice) -> bool {
    let scale = op.max_abs().max(1.0);
    for site in 1..=lattice.l {
        if support.contains(&site) {
            continue;
        }
        for a in 0..lattice.d0 {
            for b in 0..lattice.d0 {
                let unit = match embed(&Operator::matrix_unit(lattice.d0, a, b), &[site], lattice) {
                    Ok(u) => u,
                    Err(_) => return false,
                };
                if op.commutator(&unit).max_abs() > 1e-12 * scale {
                    return false;
                }
            }
        }
    }
    true
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ModelConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

/// Parse and validate a JSON model document.
pub fn parse_config(text: &str) -> Result<ModelConfig> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    config_from_value(&doc)
}

pub fn config_from_value(doc: &Value) -> Result<ModelConfig> {
    let root = as_object(doc, "")?;
    allow_keys(root, "", &["lattice", "hamiltonian", "dissipators", "gamma"])?;

    let lat = as_object(root.get("lattice").ok_or_else(|| Error::schema("/lattice", "missing"))?, "/lattice")?;
    allow_keys(lat, "/lattice", &["l", "d0"])?;
    let l = get_uint(lat, "/lattice", "l")?.ok_or_else(|| Error::schema("/lattice/l", "missing"))?;
    let d0 = get_uint(lat, "/lattice", "d0")?.unwrap_or(2);

    let gamma = match root.get("gamma") {
        None => 1.0,
        Some(v) => v.as_f64().ok_or_else(|| Error::schema("/gamma", "expected a number"))?,
    };

    let mut hamiltonian = Vec::new();
    if let Some(v) = root.get("hamiltonian") {
        let arr = v.as_array().ok_or_else(|| Error::schema("/hamiltonian", "expected an array"))?;
        for (k, item) in arr.iter().enumerate() {
            let ptr = format!("/hamiltonian/{k}");
            let obj = as_object(item, &ptr)?;
            let term = get_str(obj, &ptr, "term")?;
            let sites = get_sites(obj, &ptr)?;
            let coupling = get_f64(obj, &ptr, "coupling")?;
            if term == "custom" {
                allow_keys(obj, &ptr, &["term", "matrix", "coupling", "sites"])?;
                hamiltonian.push(TermSpec::Custom {
                    matrix: get_matrix(obj, &ptr)?,
                    coupling: coupling.unwrap_or(1.0),
                    sites,
                });
            } else {
                allow_keys(obj, &ptr, &["term", "coupling", "sites"])?;
                let coupling = coupling.ok_or_else(|| Error::schema(format!("{ptr}/coupling"), "missing"))?;
                hamiltonian.push(TermSpec::Named { term, coupling, sites });
            }
        }
    }

    let mut dissipators = Vec::new();
    if let Some(v) = root.get("dissipators") {
        let arr = v.as_array().ok_or_else(|| Error::schema("/dissipators", "expected an array"))?;
        for (k, item) in arr.iter().enumerate() {
            let ptr = format!("/dissipators/{k}");
            let obj = as_object(item, &ptr)?;
            let op = get_str(obj, &ptr, "op")?;
            let site = get_uint(obj, &ptr, "site")?.ok_or_else(|| Error::schema(format!("{ptr}/site"), "missing"))?;
            let strength = get_f64(obj, &ptr, "strength")?.unwrap_or(1.0);
            if op == "custom" {
                allow_keys(obj, &ptr, &["op", "matrix", "site", "strength"])?;
                dissipators.push(DissipatorSpec::Custom {
                    matrix: get_matrix(obj, &ptr)?,
                    site,
                    strength,
                });
            } else {
                allow_keys(obj, &ptr, &["op", "site", "strength"])?;
                dissipators.push(DissipatorSpec::Named { op, site, strength });
            }
        }
    }

    let cfg = ModelConfig {
        lattice: Lattice { l, d0 },
        hamiltonian,
        dissipators,
        gamma,
    };
    cfg.validate()?;
    // Name resolution errors surface here rather than at first use.
    build_hamiltonian(&cfg)?;
    build_dissipators(&cfg)?;
    Ok(cfg)
}

fn as_object<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::schema(if ptr.is_empty() { "/" } else { ptr }, "expected an object"))
}

fn allow_keys(obj: &Map<String, Value>, ptr: &str, keys: &[&str]) -> Result<()> {
    for k in obj.keys() {
        if !keys.contains(&k.as_str()) {
            return Err(Error::schema(format!("{ptr}/{k}"), "unknown key"));
        }
    }
    Ok(())
}

fn get_uint(obj: &Map<String, Value>, ptr: &str, key: &str) -> Result<Option<usize>> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| Error::schema(format!("{ptr}/{key}"), "expected a nonnegative integer")),
    }
}

fn get_f64(obj: &Map<String, Value>, ptr: &str, key: &str) -> Result<Option<f64>> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| Error::schema(format!("{ptr}/{key}"), "expected a number")),
    }
}

fn get_str(obj: &Map<String, Value>, ptr: &str, key: &str) -> Result<String> {
    obj.get(key)
        .ok_or_else(|| Error::schema(format!("{ptr}/{key}"), "missing"))?
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| Error::schema(format!("{ptr}/{key}"), "expected a string"))
}

fn get_sites(obj: &Map<String, Value>, ptr: &str) -> Result<Vec<usize>> {
    let arr = obj
        .get("sites")
        .ok_or_else(|| Error::schema(format!("{ptr}/sites"), "missing"))?
        .as_array()
        .ok_or_else(|| Error::schema(format!("{ptr}/sites"), "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| Error::schema(format!("{ptr}/sites/{i}"), "expected a positive integer"))
        })
        .collect()
}

fn get_matrix(obj: &Map<String, Value>, ptr: &str) -> Result<Vec<C64>> {
    let arr = obj
        .get("matrix")
        .ok_or_else(|| Error::schema(format!("{ptr}/matrix"), "missing"))?
        .as_array()
        .ok_or_else(|| Error::schema(format!("{ptr}/matrix"), "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| {
            let pair = v.as_array().filter(|p| p.len() == 2);
            match pair.map(|p| (p[0].as_f64(), p[1].as_f64())) {
                Some((Some(re), Some(im))) => Ok(C64::new(re, im)),
                _ => Err(Error::schema(format!("{ptr}/matrix/{i}"), "expected [re, im]")),
            }
        })
        .collect()
}

/// Ready-made configurations used by the examples and tests.
pub mod presets {
    use super::ModelConfig;

    /// Qubit decaying into `|0⟩`: `K = σ⁻`, no Hamiltonian.
    pub fn amplitude_damping(gamma: f64) -> ModelConfig {
        ModelConfig::new(1, 2).with_gamma(gamma).with_dissipator("sigma_minus", 1, 1.0)
    }

    /// Pure dephasing qubit: `K = σᶻ`.
    pub fn dephasing(gamma: f64) -> ModelConfig {
        ModelConfig::new(1, 2).with_gamma(gamma).with_dissipator("z", 1, 1.0)
    }

    /// Open transverse-field Ising chain `J Σ ZZ + h Σ X`, no dissipators.
    pub fn tfi_chain(l: usize, j: f64, h: f64) -> ModelConfig {
        let cfg = ModelConfig::new(l, 2).with_bond_term("zz", j);
        if h != 0.0 {
            cfg.with_field("x", h)
        } else {
            cfg
        }
    }

    /// TFI chain with `σᶻ` dissipators of strength `gamma_loc` on both edges.
    pub fn boundary_dephased_tfi(l: usize, j: f64, h: f64, gamma_loc: f64) -> ModelConfig {
        let mut cfg = tfi_chain(l, j, h).with_gamma(gamma_loc).with_dissipator("z", 1, 1.0);
        if l > 1 {
            cfg = cfg.with_dissipator("z", l, 1.0);
        }
        cfg
    }

    /// `number` dissipator on every site of a `d0`-level chain, with an
    /// optional nearest-level `flip` field of strength `coupling`.
    pub fn bulk_ladder(l: usize, d0: usize, gamma: f64, coupling: f64) -> ModelConfig {
        let mut cfg = ModelConfig::new(l, d0).with_gamma(gamma);
        if coupling != 0.0 {
            cfg = cfg.with_field("flip", coupling);
        }
        for s in 1..=l {
            cfg = cfg.with_dissipator("number", s, 1.0);
        }
        cfg
    }

    /// Classical ZZ Ising chain with a single `σˣ` dissipator on site 1.
    pub fn zz_ising_with_x_dissipator(l: usize, j: f64, gamma: f64) -> ModelConfig {
        tfi_chain(l, j, 0.0).with_gamma(gamma).with_dissipator("x", 1, 1.0)
    }

    /// Independent amplitude-damped qubits.
    pub fn damped_qubits(l: usize, gamma: f64) -> ModelConfig {
        let mut cfg = ModelConfig::new(l, 2).with_gamma(gamma);
        for s in 1..=l {
            cfg = cfg.with_dissipator("sigma_minus", s, 1.0);
        }
        cfg
    }
}

/// Random instances for property tests and benchmarks.
pub mod random {
    use super::*;

    pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Matrix of i.i.d. standard complex Gaussians.
    pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Operator {
        Operator::from_fn(dim, |_, _| gaussian_complex(rng))
    }

    /// GUE-distributed Hermitian matrix with unit-variance entries.
    pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Operator {
        ginibre(rng, dim).hermitian_part().scale_real(2f64.sqrt())
    }

    /// Haar-random normalized ket.
    pub fn haar_ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
        let v: Vec<C64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    }

    /// Generic `dim`-level Lindbladian: GUE Hamiltonian of scale `h_scale` and
    /// `jumps` Ginibre jump operators normalized to unit Frobenius norm.
    pub fn random_model<R: Rng + ?Sized>(rng: &mut R, dim: usize, jumps: usize, h_scale: f64, gamma: f64) -> SystemModel {
        let h = hermitian(rng, dim).scale_real(h_scale / (dim as f64).sqrt());
        let ks = (0..jumps)
            .map(|_| {
                let k = ginibre(rng, dim);
                let norm = k.frobenius_norm();
                k.scale_real((dim as f64).sqrt() / norm / 2.0)
            })
            .collect();
        SystemModel::from_operators(h, ks, gamma).expect("random model is well formed")
    }
}
