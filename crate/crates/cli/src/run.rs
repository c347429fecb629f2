use std::path::PathBuf;

use koszulkit::algebra::{graded_dims_with, quotient_check, ComputeOptions, Presentation};
use koszulkit::complexes::{
    dn_zero_check, euler_check, gorenstein_certificate, koszul_certificate, sd_matrix_check, ym_matrix_check,
    Certificate,
};
use koszulkit::exactlin::parse_rational;
use koszulkit::io::read_presentation;
use koszulkit::presets::{
    dual_relation_check, heisenberg_rep, representation_check, sd_dual_relation_check, sd_relation_identities,
    seeded_conjugator, self_duality, truncated_regular_representation, yang_mills, ym_relation_identities, Metric,
    PresetId, RepCandidate, Sign,
};
use koszulkit::series::{expand, lie_dims_closed_form, pq_one_check, witt_exponents, TruncatedSeries};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Map, Value};

use crate::render::int;
use crate::Common;

pub type CliResult<T> = Result<T, String>;

#[derive(Clone, Debug)]
pub enum Request {
    Dims,
    DualDims,
    Series,
    LieDims { jmax: usize },
    Koszul,
    Gorenstein,
    DnZero,
    Euler,
    DualCheck,
    RepCheck { rep: Option<PathBuf> },
    Report,
}

impl Request {
    pub fn verb(&self) -> &'static str {
        match self {
            Request::Dims => "dims",
            Request::DualDims => "dual-dims",
            Request::Series => "series",
            Request::LieDims { .. } => "lie-dims",
            Request::Koszul => "koszul",
            Request::Gorenstein => "gorenstein",
            Request::DnZero => "dnzero",
            Request::Euler => "euler",
            Request::DualCheck => "dualcheck",
            Request::RepCheck { .. } => "repcheck",
            Request::Report => "report",
        }
    }
}

pub struct Source {
    pub presentation: Presentation,
    pub preset: Option<PresetId>,
    pub description: String,
}

pub struct Outcome {
    pub cutoff: usize,
    pub results: Map<String, Value>,
    pub certificates: Vec<Certificate>,
    pub passed: bool,
}

impl Outcome {
    fn set(&mut self, key: &str, v: Value) {
        self.results.insert(key.to_string(), v);
    }

    fn check(&mut self, key: &str, ok: bool) {
        self.set(key, Value::Bool(ok));
        self.passed &= ok;
    }

    fn certificate(&mut self, c: Certificate) {
        self.passed &= c.passed();
        self.certificates.push(c);
    }
}

fn core<T>(r: koszulkit::Result<T>) -> CliResult<T> {
    r.map_err(|e| e.to_string())
}

pub fn load(c: &Common) -> CliResult<Source> {
    match (&c.preset, &c.file) {
        (Some(name), None) => {
            let id = core(PresetId::parse(name, c.metric.as_deref()))?;
            if c.metric.is_some() && !matches!(id, PresetId::YangMills(_)) {
                return Err("--metric applies only to the ym preset".into());
            }
            Ok(Source {
                presentation: core(id.build())?,
                description: format!("preset:{id}"),
                preset: Some(id),
            })
        }
        (None, Some(path)) => {
            if c.metric.is_some() {
                return Err("--metric applies only to presets; put a metric in the file instead".into());
            }
            Ok(Source {
                presentation: core(read_presentation(path))?,
                preset: None,
                description: format!("file:{}", path.display()),
            })
        }
        _ => Err("give exactly one of --preset and --file".into()),
    }
}

/// 10 for up to two generators, otherwise 8 or less if the ambient bound
/// requires it.
pub fn default_cutoff(g: usize, max_ambient: usize) -> usize {
    if g <= 2 {
        return 10;
    }
    let mut n = 0;
    while n < 8 && (g as u128).pow(n as u32 + 1) <= max_ambient as u128 {
        n += 1;
    }
    n
}

/// Metric of a Yang-Mills-type preset.
fn ym_metric(src: &Source) -> Option<Metric> {
    match &src.preset {
        Some(PresetId::YangMills(m)) => Some(m.clone()),
        Some(PresetId::Heisenberg) => Some(Metric::euclidean(2)),
        _ => None,
    }
}

fn sd_sign(src: &Source) -> Option<Sign> {
    match &src.preset {
        Some(PresetId::SelfDuality(s)) => Some(*s),
        _ => None,
    }
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn execute(src: &Source, c: &Common, req: &Request) -> CliResult<Outcome> {
    let p = &src.presentation;
    let g = p.generators();
    let cutoff = c.cutoff.unwrap_or_else(|| default_cutoff(g, c.max_ambient));
    if g > 1
        && (g as u128)
            .checked_pow(cutoff as u32)
            .is_none_or(|a| a > c.max_ambient as u128)
    {
        return Err(format!(
            "cutoff {cutoff} needs ambient dimension {g}^{cutoff}, above the bound {}",
            c.max_ambient
        ));
    }
    log::debug!("{} on {} through degree {cutoff}", req.verb(), src.description);
    let opts = ComputeOptions {
        strategy: c.field.into(),
        seed: c.seed,
        max_ambient: c.max_ambient,
    };
    let mut o = Outcome {
        cutoff,
        results: Map::new(),
        certificates: Vec::new(),
        passed: true,
    };
    match req {
        Request::Dims => {
            dims(&mut o, src, &opts)?;
        }
        Request::DualDims => dual_dims(&mut o, p, &opts)?,
        Request::Series => series(&mut o, src, &opts)?,
        Request::LieDims { jmax } => lie_dims(&mut o, src, *jmax, &opts)?,
        Request::Koszul => o.certificate(core(koszul_certificate(p, cutoff, &opts))?),
        Request::Gorenstein => o.certificate(core(gorenstein_certificate(p, cutoff, &opts))?),
        Request::DnZero => {
            o.certificate(core(dn_zero_check(p, cutoff, &opts))?);
            factorization(&mut o, src, &opts)?;
        }
        Request::Euler => o.certificate(core(euler_check(p, cutoff, &opts))?),
        Request::DualCheck => {
            if !dualcheck(&mut o, src)? {
                return Err("dualcheck needs a ym, heisenberg or sd preset".into());
            }
        }
        Request::RepCheck { rep } => repcheck(&mut o, src, rep.as_ref())?,
        Request::Report => {
            series(&mut o, src, &opts)?;
            dual_dims(&mut o, p, &opts)?;
            o.certificate(core(koszul_certificate(p, cutoff, &opts))?);
            o.certificate(core(gorenstein_certificate(p, cutoff, &opts))?);
            o.certificate(core(dn_zero_check(p, cutoff, &opts))?);
            factorization(&mut o, src, &opts)?;
            dualcheck(&mut o, src)?;
        }
    }
    Ok(o)
}

fn dims(o: &mut Outcome, src: &Source, opts: &ComputeOptions) -> CliResult<Vec<usize>> {
    let (d, how) = core(graded_dims_with(&src.presentation, o.cutoff, opts))?;
    o.set("dims", json!(d));
    o.set("dims_computed_by", json!(how));
    if let Some(id) = &src.preset {
        let cf = core(expand(&id.closed_form_series(), o.cutoff))?;
        o.set("closed_form_dims", ints(cf.coeffs()));
        let same = cf.coeffs().iter().zip(&d).all(|(a, b)| *a == BigInt::from(*b));
        o.check("dims_match_closed_form", same);
    }
    Ok(d)
}

fn dual_dims(o: &mut Outcome, p: &Presentation, opts: &ComputeOptions) -> CliResult<()> {
    let (d, how) = core(graded_dims_with(&p.dual(), o.cutoff, opts))?;
    o.set("dual_dims", json!(d));
    o.set("dual_dims_computed_by", json!(how));
    Ok(())
}

/// Graded dimensions, the Koszul polynomial `Q(t) = Σ (-1)^k r_k t^{s_k}`
/// and the truncated identity `P·Q = 1`.
fn series(o: &mut Outcome, src: &Source, opts: &ComputeOptions) -> CliResult<()> {
    let d = dims(o, src, opts)?;
    let e = core(euler_check(&src.presentation, o.cutoff, opts))?;
    let top = e.positions.last().map_or(0, |p| p.index);
    let mut q = vec![BigInt::from(0); top + 1];
    for (k, pos) in e.positions.iter().enumerate() {
        let r = BigInt::from(pos.rank);
        q[pos.index] = if k % 2 == 0 { r } else { -r };
    }
    o.set("koszul_q", ints(&q));
    o.check("pq_one", pq_one_check(&TruncatedSeries::from_dims(&d), &q));
    o.certificate(e);
    Ok(())
}

fn lie_dims(o: &mut Outcome, src: &Source, jmax: usize, opts: &ComputeOptions) -> CliResult<()> {
    if jmax == 0 {
        return Err("--jmax must be positive".into());
    }
    let (series, source) = match &src.preset {
        Some(id) => (core(expand(&id.closed_form_series(), jmax))?, "closed-form series"),
        None => {
            let (d, _) = core(graded_dims_with(&src.presentation, jmax, opts))?;
            (TruncatedSeries::from_dims(&d), "graded dimensions")
        }
    };
    let w = core(witt_exponents(&series))?;
    o.set("jmax", json!(jmax));
    o.set("series_source", json!(source));
    o.set("lie_dims", ints(w.values()));
    o.check("enveloping", w.values().iter().all(|n| !n.is_negative()));
    o.check("reconstructs_series", core(w.reconstruct(jmax))? == series);
    if let (Some(m), true) = (ym_metric(src), jmax >= 3) {
        let cf = core(lie_dims_closed_form(m.dim() as u64 - 1, jmax))?;
        o.set("closed_form_lie_dims", ints(cf.values()));
        o.check("closed_form_agrees", cf.values() == w.values());
    }
    Ok(())
}

/// The closed-form matrices `M` and `N` against the Koszul complex maps.
fn factorization(o: &mut Outcome, src: &Source, opts: &ComputeOptions) -> CliResult<()> {
    if let Some(m) = ym_metric(src) {
        let (ok, how) = core(ym_matrix_check(&m, o.cutoff, opts))?;
        o.check("m_matrix_matches", ok);
        o.set("m_matrix_computed_by", json!(how));
    }
    if let Some(s) = sd_sign(src) {
        let (ok, how) = core(sd_matrix_check(s, o.cutoff, opts))?;
        o.check("n_matrix_matches", ok);
        o.set("n_matrix_computed_by", json!(how));
    }
    Ok(())
}

/// Returns false when the input has no dual-relation data.
fn dualcheck(o: &mut Outcome, src: &Source) -> CliResult<bool> {
    if let Some(m) = ym_metric(src) {
        o.check("dual_relations", core(dual_relation_check(&m))?);
        o.check("relation_identities", core(ym_relation_identities(&m))?);
        if m == Metric::euclidean(4) {
            let r = src.presentation.relators();
            for (key, s) in [
                ("quotient_self_duality_plus", Sign::Plus),
                ("quotient_self_duality_minus", Sign::Minus),
            ] {
                o.check(key, core(quotient_check(r, self_duality(s).relators()))?);
            }
        }
        return Ok(true);
    }
    if let Some(s) = sd_sign(src) {
        o.check("dual_relations", core(sd_dual_relation_check(s))?);
        o.check("relation_identities", core(sd_relation_identities(s))?);
        let ym = core(yang_mills(&Metric::euclidean(4)))?;
        o.check(
            "quotient_of_yang_mills",
            core(quotient_check(ym.relators(), src.presentation.relators()))?,
        );
        return Ok(true);
    }
    Ok(false)
}

fn read_rep(path: &PathBuf) -> CliResult<RepCandidate> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{}: line {}: {e}", path.display(), e.line()))?;
    let bad = || {
        format!(
            "{}: expected {{\"matrices\": [[[entry, ...], ...], ...]}}",
            path.display()
        )
    };
    let mats = v.get("matrices").and_then(Value::as_array).ok_or_else(bad)?;
    let mut out = Vec::with_capacity(mats.len());
    for m in mats {
        let rows = m.as_array().ok_or_else(bad)?;
        let mut dense = Vec::with_capacity(rows.len());
        for r in rows {
            let entries = r.as_array().ok_or_else(bad)?;
            let row = entries
                .iter()
                .map(|e| {
                    let s = match e {
                        Value::String(s) => s.clone(),
                        Value::Number(n) if n.is_i64() => n.to_string(),
                        _ => return Err(format!("{}: bad matrix entry {e}", path.display())),
                    };
                    parse_rational(&s).ok_or_else(|| format!("{}: bad matrix entry {s:?}", path.display()))
                })
                .collect::<CliResult<Vec<_>>>()?;
            dense.push(row);
        }
        out.push(dense);
    }
    core(RepCandidate::new(out))
}

fn repcheck(o: &mut Outcome, src: &Source, rep: Option<&PathBuf>) -> CliResult<()> {
    let p = &src.presentation;
    if let Some(path) = rep {
        let r = read_rep(path)?;
        o.set("size", json!(r.size()));
        o.check("satisfies_relations", core(representation_check(p, &r))?);
        return Ok(());
    }
    // built-in candidates that must satisfy the relations
    let mut candidates: Vec<(String, RepCandidate)> = vec![("zero".into(), RepCandidate::zeros(p.generators(), 2))];
    let top = p.degree();
    if let Ok(r) = truncated_regular_representation(p, top) {
        if r.size() <= 128 {
            candidates.push((format!("regular representation to degree {top}"), r));
        }
    }
    if p.generators() == 2 && ym_metric(src).is_some() {
        candidates.push(("heisenberg E12, E23".into(), heisenberg_rep()));
    }
    let sd_signs: Vec<Sign> = match (&src.preset, ym_metric(src)) {
        (Some(PresetId::SelfDuality(s)), _) => vec![*s],
        (_, Some(m)) if m.dim() == 4 => vec![Sign::Plus, Sign::Minus],
        _ => Vec::new(),
    };
    for s in sd_signs {
        let sd = self_duality(s);
        let r = core(truncated_regular_representation(&sd, 3))?;
        let r = core(r.conjugate(&seeded_conjugator(r.size(), o_seed(src, s))))?;
        candidates.push((
            format!("{} regular representation to degree 3, conjugated", sd.label()),
            r,
        ));
    }
    let mut rows = Vec::new();
    for (name, r) in candidates {
        let ok = core(representation_check(p, &r))?;
        o.passed &= ok;
        rows.push(json!({"name": name, "size": r.size(), "satisfies_relations": ok}));
    }
    o.set("representations", Value::Array(rows));
    Ok(())
}

fn o_seed(src: &Source, s: Sign) -> u64 {
    // fixed per preset so output does not depend on anything else
    src.description.len() as u64 * 31 + matches!(s, Sign::Minus) as u64
}
