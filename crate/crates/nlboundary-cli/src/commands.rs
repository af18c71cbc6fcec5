//! The four subcommands. Each returns a JSON report and whether every asserted check passed.

use crate::config::{parse_rat_vec, parse_rational, JobConfig};
use nlboundary::boundary::{
    assemble, holomorphic_replacement_ii, require_signature_n2, synthetic_zplus_ii, z_minus_type_ii, z_minus_type_iii,
    CuspContribution, ExactTerms, GeneratingSeriesInput, Replacement, Truncation,
};
use nlboundary::degeneration::{invariants, lemma_checks, DegenType, DegenerationData, Invariants};
use nlboundary::orbitlab::{Cutoffs, OrbitModel};
use nlboundary::quadlattice::{discriminant_group, Lattice};
use nlboundary::thetaforms::VVQExpansion;
use nlboundary::{Error, Real};
use num_complex::Complex;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::str::FromStr;

/// Failure with its process exit status.
#[derive(Debug)]
pub struct CmdError {
    pub code: i32,
    pub message: String,
}

impl CmdError {
    pub fn input(msg: impl Into<String>) -> Self {
        CmdError { code: 2, message: msg.into() }
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::InvariantInconsistency(_)) { 1 } else { 2 };
        CmdError { code, message: e.to_string() }
    }
}

pub type CmdResult = Result<(Value, bool), CmdError>;

pub fn rat_str(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn num<R: Real>(x: R) -> Value {
    json!(x.to_f64().unwrap_or(f64::NAN))
}

fn cvals<R: Real>(v: &[Complex<R>]) -> Value {
    Value::Array(v.iter().map(|z| json!([num(z.re), num(z.im)])).collect())
}

struct Cusp {
    label: String,
    index: usize,
    d: DegenerationData,
}

struct Job {
    cfg: JobConfig,
    lattice: Lattice,
    cusps: Vec<Cusp>,
}

fn prepare(cfg: JobConfig) -> Result<Job, CmdError> {
    cfg.validate().map_err(CmdError::input)?;
    let lattice = cfg.lattice().map_err(CmdError::input)?;
    require_signature_n2(&lattice)?;
    let mut cusps: Vec<Cusp> = cfg
        .cusps
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let t = crate::config::int_matrix(&c.t, &format!("cusps[{}].T", i)).map_err(CmdError::input)?;
            let d = DegenerationData::from_monodromy(t, lattice.clone())
                .map_err(|e| CmdError { message: format!("cusp {}: {}", c.label, e), ..CmdError::from(e) })?;
            Ok(Cusp { label: c.label.clone(), index: i, d })
        })
        .collect::<Result<_, CmdError>>()?;
    cusps.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(Job { cfg, lattice, cusps })
}

fn header(cmd: &str, job: &Job) -> serde_json::Map<String, Value> {
    let a = discriminant_group(&job.lattice);
    let (p, n) = job.lattice.signature();
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(1));
    m.insert("command".into(), json!(cmd));
    m.insert("label".into(), json!(job.cfg.label));
    m.insert("precision".into(), json!(job.cfg.options.precision));
    m.insert(
        "lattice".into(),
        json!({
            "rank": job.lattice.rank(),
            "signature": [p, n],
            "det": job.lattice.det().to_string(),
            "discriminant_order": a.len(),
        }),
    );
    m
}

fn invariants_json(inv: &Invariants) -> Value {
    match inv {
        Invariants::II { r1, disc31, deg_q3 } => {
            json!({"r1": r1.to_string(), "disc31": disc31.to_string(), "deg_q3": deg_q3.to_string()})
        }
        Invariants::III { r2, disc40, vol4 } => {
            json!({"r2": r2.to_string(), "disc40": disc40.to_string(), "vol4": vol4.to_string()})
        }
    }
}

fn cusp_warnings(c: &Cusp) -> Vec<String> {
    let mut w = Vec::new();
    if c.d.kind == DegenType::Trivial {
        w.push(format!("cusp {}: monodromy is trivial, extendable across puncture", c.label));
    }
    if c.d.exponent > 1.into() {
        w.push(format!("cusp {}: quasi-unipotent, passed to the degree {} cover", c.label, c.d.exponent));
    }
    w
}

pub fn analyze(cfg: JobConfig) -> CmdResult {
    let job = prepare(cfg)?;
    let rows: Vec<(Value, Vec<String>)> = job
        .cusps
        .par_iter()
        .map(|c| {
            let ranks: Vec<usize> = c.d.w.iter().map(|m| m.rows()).collect();
            let (inv, lemma) = if c.d.kind == DegenType::Trivial {
                (Value::Null, Value::Null)
            } else {
                let inv = invariants_json(&invariants(&c.d)?);
                let lemma = if c.d.kind == DegenType::III {
                    let l = lemma_checks(&c.d)?;
                    json!({"gr4_even": l.gr4_even, "n_gr4_integral": l.n_gr4_integral, "dual_containment": l.dual_containment})
                } else {
                    Value::Null
                };
                (inv, lemma)
            };
            let row = json!({
                "label": c.label,
                "type": c.d.kind.to_string(),
                "exponent": c.d.exponent.to_string(),
                "unipotent": c.d.exponent == 1.into(),
                "nontrivial": c.d.kind != DegenType::Trivial,
                "filtration_ranks": ranks,
                "invariants": inv,
                "lemma_checks": lemma,
            });
            Ok((row, cusp_warnings(c)))
        })
        .collect::<Result<_, CmdError>>()?;
    let mut out = header("analyze", &job);
    let warnings: Vec<String> = rows.iter().flat_map(|r| r.1.clone()).collect();
    out.insert("cusps".into(), Value::Array(rows.into_iter().map(|r| r.0).collect()));
    out.insert("warnings".into(), json!(warnings));
    out.insert("pass".into(), json!(true));
    Ok((Value::Object(out), true))
}

fn truncation(job: &Job) -> Result<Truncation, CmdError> {
    Ok(Truncation {
        m_max: job.cfg.m_max().map_err(CmdError::input)?,
        w_max: job.cfg.w_max().map_err(CmdError::input)?,
        tol: job.cfg.options.tol,
    })
}

fn z_minus<R: Real>(job: &Job, c: &Cusp) -> Result<Option<CuspContribution<R>>, CmdError> {
    let tr = truncation(job)?;
    Ok(match c.d.kind {
        DegenType::Trivial => None,
        DegenType::II => Some(z_minus_type_ii(&c.d, &tr.m_max, &c.label)?),
        DegenType::III => Some(z_minus_type_iii(&c.d, &tr, &c.label)?),
    })
}

fn exact_json(e: &ExactTerms) -> Value {
    match e {
        ExactTerms::InvY { factor, terms } => json!({
            "form": "factor * count / (4 pi y)",
            "factor": rat_str(factor),
            "terms": terms.iter().map(|((m, j), n)| json!({"m": rat_str(m), "class": j, "count": n.to_string()})).collect::<Vec<_>>(),
        }),
        ExactTerms::Beta { factor_sq, terms } => json!({
            "form": "sqrt(factor_sq) * count / (4 pi) * y^(-1/2) * beta_3/2(2 pi rate y)",
            "factor_sq": rat_str(factor_sq),
            "terms": terms
                .iter()
                .map(|((m, j, r), n)| json!({"m": rat_str(m), "class": j, "rate": rat_str(r), "count": n.to_string()}))
                .collect::<Vec<_>>(),
        }),
    }
}

fn taus<R: Real>(job: &Job) -> Vec<Complex<R>> {
    job.cfg.options.tau_samples.iter().map(|t| Complex::new(R::lit(t[0]), R::lit(t[1]))).collect()
}

fn samples_json<R: Real>(f: &VVQExpansion<R>, taus: &[Complex<R>]) -> Result<Value, CmdError> {
    let mut out = Vec::new();
    for &t in taus {
        out.push(json!({"tau": [num(t.re), num(t.im)], "values": cvals(&f.eval(t)?)}));
    }
    Ok(Value::Array(out))
}

pub fn boundary<R: Real>(cfg: JobConfig) -> CmdResult {
    let job = prepare(cfg)?;
    let ts = taus::<R>(&job);
    let rows: Vec<(Value, Vec<String>)> = job
        .cusps
        .par_iter()
        .map(|c| {
            let mut warnings = cusp_warnings(c);
            let Some(z) = z_minus::<R>(&job, c)? else {
                return Ok((json!({"label": c.label, "type": c.d.kind.to_string(), "z_minus": Value::Null}), warnings));
            };
            if let Some(tb) = z.tail_bound {
                warnings.push(format!("cusp {}: omitted w-sum bounded by {:.3e} for y >= 1/2", c.label, tb.to_f64().unwrap_or(f64::NAN)));
            }
            let row = json!({
                "label": c.label,
                "type": c.d.kind.to_string(),
                "invariants": invariants_json(&z.invariants),
                "weight": rat_str(&z.series.weight),
                "m_max": rat_str(&z.series.m_max),
                "z_minus": exact_json(&z.exact),
                "tail_bound": z.tail_bound.map(num),
                "samples": samples_json(&z.series, &ts)?,
            });
            Ok((row, warnings))
        })
        .collect::<Result<_, CmdError>>()?;
    let mut out = header("boundary", &job);
    let warnings: Vec<String> = rows.iter().flat_map(|r| r.1.clone()).collect();
    out.insert("cusps".into(), Value::Array(rows.into_iter().map(|r| r.0).collect()));
    out.insert("warnings".into(), json!(warnings));
    out.insert("pass".into(), json!(true));
    Ok((Value::Object(out), true))
}

fn zplus_input(job: &Job) -> Result<(GeneratingSeriesInput, String), CmdError> {
    let m_max = job.cfg.m_max().map_err(CmdError::input)?;
    if let Some(label) = &job.cfg.zplus_synthetic {
        let c = job.cusps.iter().find(|c| &c.label == label).expect("validated label");
        let s = synthetic_zplus_ii(&c.d, &m_max)?;
        return Ok((GeneratingSeriesInput::from_series(&s), format!("synthetic from cusp {}", label)));
    }
    let Some(terms) = &job.cfg.zplus else {
        return Ok((GeneratingSeriesInput::default(), "absent (Z+ = 0)".into()));
    };
    let mut input = GeneratingSeriesInput::default();
    for (i, t) in terms.iter().enumerate() {
        let m = parse_rational(&t.m, &format!("zplus[{}].m", i)).map_err(CmdError::input)?;
        let v = parse_rational(&t.value, &format!("zplus[{}].value", i)).map_err(CmdError::input)?;
        *input.coeffs.entry((m, t.class)).or_insert_with(|| BigRational::from_integer(0.into())) += v;
    }
    Ok((input, "config".into()))
}

pub fn check<R: Real>(cfg: JobConfig) -> CmdResult {
    let job = prepare(cfg)?;
    let m_max = job.cfg.m_max().map_err(CmdError::input)?;
    let (zplus, source) = zplus_input(&job)?;
    let parts: Vec<(Option<VVQExpansion<R>>, Value, Vec<String>)> = job
        .cusps
        .par_iter()
        .map(|c| {
            let warnings = cusp_warnings(c);
            let repl = job.cfg.cusps[c.index].replacement.as_deref();
            let (series, used) = match (c.d.kind, repl) {
                (DegenType::Trivial, _) => (None, "none"),
                (DegenType::II, Some(r)) => {
                    let v = Replacement::from_str(r).map_err(CmdError::input)?;
                    (Some(holomorphic_replacement_ii(&c.d, v, &m_max)?.to_expansion::<R>()), r)
                }
                (_, Some(_)) => return Err(CmdError::input(format!("cusp {}: replacements exist only for type II", c.label))),
                _ => (z_minus::<R>(&job, c)?.map(|z| z.series), "z_minus"),
            };
            Ok((series, json!({"label": c.label, "type": c.d.kind.to_string(), "series": used}), warnings))
        })
        .collect::<Result<_, CmdError>>()?;
    let series: Vec<VVQExpansion<R>> = parts.iter().filter_map(|p| p.0.clone()).collect();
    let ts = taus::<R>(&job);
    let a = assemble(&zplus, &series, &job.lattice, &m_max)?;
    let rep = a.modularity(&ts)?;
    let tol = job.cfg.options.residual_tol;
    let s = rep.s_residual.to_f64().unwrap_or(f64::NAN);
    let t = rep.t_residual.to_f64().unwrap_or(f64::NAN);
    let pass = s < tol && t < tol && rep.exponents_consistent;
    let mut out = header("check", &job);
    let mut warnings: Vec<String> = parts.iter().flat_map(|p| p.2.clone()).collect();
    if job.cfg.zplus.is_none() && job.cfg.zplus_synthetic.is_none() {
        warnings.push("no Z+ given: residual is that of the boundary terms alone".into());
    }
    out.insert("zplus".into(), json!(source));
    out.insert("cusps".into(), Value::Array(parts.into_iter().map(|p| p.1).collect()));
    out.insert(
        "residuals".into(),
        json!({
            "S": s,
            "T": t,
            "threshold": tol,
            "exponents_consistent": rep.exponents_consistent,
            "samples": ts.iter().map(|z| json!([num(z.re), num(z.im)])).collect::<Vec<_>>(),
        }),
    );
    out.insert("warnings".into(), json!(warnings));
    out.insert("pass".into(), json!(pass));
    Ok((Value::Object(out), pass))
}

fn orbit_model(job: &Job, c: &Cusp) -> Result<Option<OrbitModel>, CmdError> {
    let cc = &job.cfg.cusps[c.index];
    if let (Some(re), Some(im)) = (&cc.e21_re, &cc.e21_im) {
        let re = parse_rat_vec(re, &format!("cusps[{}].e21_re", c.index)).map_err(CmdError::input)?;
        let im = parse_rat_vec(im, &format!("cusps[{}].e21_im", c.index)).map_err(CmdError::input)?;
        return Ok(Some(OrbitModel::type_ii(c.d.clone(), re, im)?));
    }
    if let Some(f) = &cc.e22 {
        let f = parse_rat_vec(f, &format!("cusps[{}].e22", c.index)).map_err(CmdError::input)?;
        return Ok(Some(OrbitModel::type_iii(c.d.clone(), f)?));
    }
    Ok(None)
}

pub fn verify_residue<R: Real>(cfg: JobConfig) -> CmdResult {
    let job = prepare(cfg)?;
    let o = &job.cfg.options;
    let cut = Cutoffs { tol: o.tol, ..Cutoffs::default() };
    let points: Vec<(BigRational, usize)> = o
        .residue_points
        .iter()
        .enumerate()
        .map(|(i, (m, j))| Ok((parse_rational(m, &format!("options.residue_points[{}]", i))?, *j)))
        .collect::<Result<_, String>>()
        .map_err(CmdError::input)?;
    let results: Vec<(Vec<Value>, Vec<String>, bool)> = job
        .cusps
        .par_iter()
        .map(|c| {
            let mut warnings = cusp_warnings(c);
            let Some(model) = orbit_model(&job, c)? else {
                if c.d.kind != DegenType::Trivial {
                    warnings.push(format!("cusp {}: no orbit model given, skipped", c.label));
                }
                return Ok((Vec::new(), warnings, true));
            };
            let mut rows = Vec::new();
            let mut ok = true;
            for (m, j) in &points {
                let fit = model.residue_slope(R::lit(o.residue_y), m, *j, &o.residue_heights, &cut)?;
                let pass = fit.rel_error.to_f64().unwrap_or(f64::NAN) < o.residue_tol;
                ok &= pass;
                rows.push(json!({
                    "cusp": c.label,
                    "m": rat_str(m),
                    "class": j,
                    "y": o.residue_y,
                    "slope": num(fit.slope),
                    "predicted": num(fit.predicted),
                    "rel_error": num(fit.rel_error),
                    "log_coeff": num(fit.log_coeff),
                    "secant_rel_errors": fit.secant_errors.iter().map(|&e| num(e)).collect::<Vec<_>>(),
                    "pass": pass,
                }));
            }
            Ok((rows, warnings, ok))
        })
        .collect::<Result<_, CmdError>>()?;
    let pass = results.iter().all(|r| r.2);
    let mut out = header("verify-residue", &job);
    out.insert("heights".into(), json!(o.residue_heights));
    out.insert("threshold".into(), json!(o.residue_tol));
    out.insert("warnings".into(), json!(results.iter().flat_map(|r| r.1.clone()).collect::<Vec<_>>()));
    out.insert("residues".into(), Value::Array(results.into_iter().flat_map(|r| r.0).collect()));
    out.insert("pass".into(), json!(pass));
    Ok((Value::Object(out), pass))
}
