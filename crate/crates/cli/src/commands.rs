use std::collections::BTreeMap;

use delpezzo::hilbert::{self, BettiContext, BettiTable};
use delpezzo::positivity::{self, CodimReport};
use delpezzo::{bps, picard, sampling, DelPezzoSurface, DivisorClass};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::SeriesCache;
use crate::{CliError, Command};

/// Points allowed in one `--beta-range` sweep.
const MAX_GRID: usize = 100_000;

pub(crate) struct Outcome {
    pub result: Value,
    pub certified: BTreeMap<String, bool>,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn plain(result: Value) -> Self {
        Self { result, certified: BTreeMap::new(), warnings: Vec::new() }
    }

    fn flag(mut self, name: &str, value: bool) -> Self {
        self.certified.insert(name.to_string(), value);
        self
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(e.to_string()))
}

pub(crate) fn describe(cmd: &Command) -> (&'static str, Value) {
    fn v<T: Serialize>(args: &T) -> Value {
        serde_json::to_value(args).unwrap_or(Value::Null)
    }
    match cmd {
        Command::Surface(a) => ("surface", v(a)),
        Command::Rr(a) => ("rr", v(a)),
        Command::Genus(a) => ("genus", v(a)),
        Command::Lines { surface, list } => ("lines", json!({ "surface": surface.surface, "list": list })),
        Command::Codim(a) => ("codim", v(a)),
        Command::CheckA(a) => ("check-a", v(a)),
        Command::CheckP(a) => ("check-p", v(a)),
        Command::MinN(a) => ("min-n", v(a)),
        Command::Betti(a) => ("betti", v(a)),
        Command::StableBetti(a) => ("stable-betti", v(a)),
        Command::ModuliBetti(a) => ("moduli-betti", v(a)),
        Command::ModuliDim(a) => ("moduli-dim", v(a)),
        Command::JacDegree(a) => ("jac-degree", v(a)),
        Command::PicardBound(a) => ("picard-bound", v(a)),
        Command::Bps(a) => ("bps", v(a)),
        Command::TautCount(a) => ("taut-count", v(a)),
        Command::Gap(a) => ("gap", v(a)),
    }
}

fn surface(token: &str) -> Result<DelPezzoSurface, CliError> {
    Ok(token.parse::<DelPezzoSurface>()?)
}

fn class(s: &DelPezzoSurface, text: &str) -> Result<DivisorClass, CliError> {
    Ok(s.parse_class(text)?)
}

/// Parses `lo..hi` (inclusive) or a single integer.
fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Input(format!("malformed range `{text}`; expected lo..hi"));
    let (lo, hi) = match text.trim().split_once("..") {
        Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
        None => {
            let v = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Cartesian product of per-coordinate ranges, first coordinate slowest.
fn grid(s: &DelPezzoSurface, spec: &str) -> Result<Vec<DivisorClass>, CliError> {
    let ranges = spec.split(',').map(parse_range).collect::<Result<Vec<_>, _>>()?;
    let rank = s.picard_rank();
    if ranges.len() != rank {
        return Err(delpezzo::Error::DimensionMismatch { expected: rank, found: ranges.len() }.into());
    }
    let size = ranges
        .iter()
        .try_fold(1usize, |acc, (lo, hi)| acc.checked_mul((hi - lo + 1) as usize))
        .filter(|&n| n <= MAX_GRID)
        .ok_or_else(|| CliError::Input(format!("grid larger than {MAX_GRID} points")))?;
    let mut points: Vec<Vec<i64>> = vec![Vec::with_capacity(rank)];
    for &(lo, hi) in &ranges {
        points = points
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    debug_assert_eq!(points.len(), size);
    Ok(points.into_iter().map(DivisorClass::new).collect())
}

fn codim_value(report: &CodimReport, witness: bool) -> Result<Value, CliError> {
    let mut v = to_value(report)?;
    if !witness {
        if let Value::Object(m) = &mut v {
            m.remove("witness");
        }
    }
    Ok(v)
}

/// Moves a library `certified` field out of the payload so it does not
/// collide with the envelope's map.
fn lift_certified(v: &mut Value) -> bool {
    match v {
        Value::Object(m) => m.remove("certified").and_then(|c| c.as_bool()).unwrap_or(false),
        _ => false,
    }
}

fn goettsche_cached(
    cache: &SeriesCache,
    s: &DelPezzoSurface,
    z_order: u32,
    t_order: u32,
    warnings: &mut Vec<String>,
) -> Result<delpezzo::series::TruncatedSeries, CliError> {
    let (b0, b1, b2) = s.betti();
    let params = [b0, b1, b2, z_order, t_order];
    cache.series(
        "goettsche",
        &params,
        || hilbert::goettsche_series(b0, b1, b2, z_order, t_order),
        |series| {
            let probe = if z_order > 2 && t_order > 1 { series.count(&[2, 1]).ok() == Some(b2 as u64) } else { true };
            series.orders() == [z_order, t_order] && series.count(&[0, 0]).ok() == Some(1) && probe
        },
        warnings,
    )
}

fn stable_cached(
    cache: &SeriesCache,
    s: &DelPezzoSurface,
    z_order: u32,
    warnings: &mut Vec<String>,
) -> Result<delpezzo::series::TruncatedSeries, CliError> {
    let (_, _, b2) = s.betti();
    cache.series(
        "stable",
        &[b2, z_order],
        || hilbert::stable_series(b2, z_order),
        |series| {
            let probe = if z_order > 2 { series.count(&[2]).ok() == Some(b2 as u64 + 1) } else { true };
            series.orders() == [z_order] && series.count(&[0]).ok() == Some(1) && probe
        },
        warnings,
    )
}

pub(crate) fn dispatch(cmd: &Command, cache: &SeriesCache) -> Result<Outcome, CliError> {
    match cmd {
        Command::Surface(a) => {
            let s = surface(&a.surface)?;
            let rho = s.picard_rank();
            let basis: Vec<DivisorClass> = (0..rho).map(|i| DivisorClass::basis(rho, i)).collect();
            let k = s.canonical_class();
            Ok(Outcome::plain(json!({
                "surface": s.token(),
                "picard_rank": rho,
                "basis": s.basis_names(),
                "gram": s.gram_of(&basis),
                "canonical": k,
                "degree": s.intersect(&k, &k)?,
                "betti": [s.betti().0, s.betti().1, s.betti().2],
                "minus_one_curves": s.minus_one_curves().len(),
                "conic_classes": s.ruling_classes().len(),
            })))
        }
        Command::Rr(a) => {
            let s = surface(&a.surface)?;
            let beta = class(&s, &a.beta)?;
            let k = s.canonical_class();
            let dim = s.dim_linear_system(&beta).ok();
            let mut out = Outcome::plain(json!({
                "beta": beta,
                "square": s.intersect(&beta, &beta)?,
                "canonical_degree": s.intersect(&beta, &k)?,
                "arithmetic_genus": s.arithmetic_genus(&beta)?,
                "chi": s.chi_line_bundle(&beta)?,
                "nef": s.is_nef(&beta)?,
                "dim_linear_system": dim,
            }))
            .flag("dim_linear_system", dim.is_some());
            if dim.is_none() {
                out.warnings.push(format!("{beta} is not nef; dim|β| = χ − 1 is not certified"));
            }
            Ok(out)
        }
        Command::Genus(a) => {
            let s = surface(&a.surface)?;
            let beta = class(&s, &a.beta)?;
            Ok(Outcome::plain(json!({ "beta": beta, "arithmetic_genus": s.arithmetic_genus(&beta)? })))
        }
        Command::Lines { surface: a, list } => {
            let s = surface(&a.surface)?;
            let curves = s.minus_one_curves();
            let mut v = json!({ "count": curves.len() });
            if *list {
                v["curves"] = to_value(&curves)?;
            }
            Ok(Outcome::plain(v))
        }
        Command::Codim(a) => {
            let s = surface(&a.surface)?;
            if let Some(spec) = &a.beta_range {
                let points = grid(&s, spec)?;
                let reports: Vec<Value> = points
                    .par_iter()
                    .map(|beta| codim_value(&positivity::codim_nonintegral(&s, beta)?, a.witness))
                    .collect::<Result<_, CliError>>()?;
                return Ok(Outcome::plain(json!({ "results": reports })));
            }
            let beta = class(&s, a.beta.as_deref().unwrap_or_default())?;
            let report = positivity::codim_nonintegral(&s, &beta)?;
            let mut out = Outcome::plain(codim_value(&report, a.witness)?);
            if report.exact_codim.is_none() {
                out.warnings.push(format!("every member of |{beta}| is integral"));
            }
            Ok(out)
        }
        Command::CheckA(a) => {
            let s = surface(&a.surface)?;
            let beta = class(&s, &a.beta)?;
            let report = if a.relaxed {
                positivity::check_ai_relaxed(&s, &beta, a.i)?
            } else {
                positivity::check_ai(&s, &beta, a.i)?
            };
            let name = if a.relaxed { format!("A_{}_relaxed", a.i) } else { format!("A_{}", a.i) };
            let mut out = Outcome::plain(to_value(&report)?).flag(&name, report.passed);
            for c in report.clauses.iter().filter(|c| c.proxy) {
                out.warnings.push(format!("clause `{}` uses a numerical proxy", c.name));
            }
            if let Some(trials) = a.verify_samples {
                let order = if a.relaxed { a.i.min(2) } else { a.i };
                match sampling::very_ample_sampled(&s, &beta, order, trials, a.seed) {
                    Ok(sampled) => {
                        let criterion = report.clauses.iter().any(|c| c.name == "very_ample" && c.passed);
                        if criterion && !sampled.consistent {
                            out.warnings.push("a sampled subscheme contradicts the very-ampleness criterion".into());
                        }
                        out.result["very_ample_sampled"] = to_value(&sampled)?;
                    }
                    Err(e) => out.warnings.push(format!("sampling skipped: {e}")),
                }
            }
            Ok(out)
        }
        Command::CheckP(a) => {
            let s = surface(&a.surface)?;
            let beta = class(&s, &a.beta)?;
            let report = positivity::check_p(&s, &beta)?;
            Ok(Outcome::plain(to_value(&report)?).flag("P", report.passed))
        }
        Command::MinN(a) => {
            let s = surface(&a.surface)?;
            let beta = class(&s, &a.beta)?;
            let n = positivity::min_n_for_ai(&s, &beta, a.i)?;
            Ok(Outcome::plain(json!({ "beta": beta, "i": a.i, "n": n })))
        }
        Command::Betti(a) => {
            let s = surface(&a.surface)?;
            let mut warnings = Vec::new();
            let top = a.k.unwrap_or(4 * a.m);
            let series = goettsche_cached(cache, &s, top + 1, a.m + 1, &mut warnings)?;
            let degrees: Vec<u32> = match a.k {
                Some(k) => vec![k],
                None => (0..=top).collect(),
            };
            let entries = degrees
                .into_iter()
                .map(|k| Ok((k, hilbert::betti_from_series(&series, a.m, k)?)))
                .collect::<Result<_, CliError>>()?;
            let table = BettiTable { context: BettiContext::Hilbert { surface: s.token(), m: a.m }, entries };
            Ok(Outcome { result: to_value(&table)?, certified: BTreeMap::new(), warnings })
        }
        Command::StableBetti(a) => {
            let s = surface(&a.surface)?;
            let mut warnings = Vec::new();
            let series = stable_cached(cache, &s, a.max_k + 1, &mut warnings)?;
            let entries = (0..=a.max_k)
                .map(|k| Ok((k, series.count(&[k]).map_err(delpezzo::Error::from)?)))
                .collect::<Result<_, CliError>>()?;
            let table = BettiTable { context: BettiContext::Stable { surface: s.token() }, entries };
            Ok(Outcome { result: to_value(&table)?, certified: BTreeMap::new(), warnings })
        }
        Command::ModuliBetti(a) => {
            let s = surface(&a.surface)?;
            let beta = class(&s, &a.beta)?;
            let degrees: Vec<u32> = match (&a.k_range, a.k) {
                (Some(r), _) => {
                    let (lo, hi) = parse_range(r)?;
                    if lo < 0 {
                        return Err(CliError::Input("degrees must be nonnegative".into()));
                    }
                    (lo as u32..=hi as u32).collect()
                }
                (None, Some(k)) => vec![k],
                (None, None) => return Err(CliError::Input("give --k or --k-range".into())),
            };
            let rows: Vec<(u32, Value, bool)> = degrees
                .par_iter()
                .map(|&k| {
                    let mut v = to_value(&hilbert::moduli_ih_betti(&s, &beta, a.chi, k)?)?;
                    let c = lift_certified(&mut v);
                    Ok((k, v, c))
                })
                .collect::<Result<_, CliError>>()?;
            if a.k_range.is_none() {
                let (_, v, c) = rows.into_iter().next().expect("one degree");
                return Ok(Outcome::plain(v).flag("ih_betti", c));
            }
            let mut out = Outcome::plain(Value::Null);
            let mut list = Vec::new();
            for (k, v, c) in rows {
                out.certified.insert(format!("k={k}"), c);
                list.push(v);
            }
            out.result = json!({ "results": list });
            Ok(out)
        }
        Command::ModuliDim(a) => {
            let s = surface(&a.surface)?;
            let beta = class(&s, &a.beta)?;
            Ok(Outcome::plain(json!({ "beta": beta, "dimension": hilbert::moduli_dimension(&s, &beta)? })))
        }
        Command::JacDegree(a) => {
            let s = surface(&a.surface)?;
            let beta = class(&s, &a.beta)?;
            let degree = hilbert::jacobian_degree(&s, &beta, a.chi)?;
            Ok(Outcome::plain(json!({ "beta": beta, "chi": a.chi, "degree": degree })))
        }
        Command::PicardBound(a) => {
            let s = surface(&a.surface)?;
            let beta = class(&s, &a.beta)?;
            let bound = picard::picard_lower_bound(&s, &beta)?;
            let mut v = to_value(&bound)?;
            let c = lift_certified(&mut v);
            let mut out = Outcome::plain(v).flag("picard_bound", c);
            if let Some(r) = &bound.report {
                if !r.check_p {
                    out.warnings.push(format!("{beta} does not satisfy (P)"));
                }
                if r.sign == Some(-1) {
                    out.warnings.push("determinant equals the quoted right side up to sign -1".into());
                }
            }
            Ok(out)
        }
        Command::Bps(a) => {
            let table = bps::refined_bps_table(a.max_total, a.d)?;
            let mut out = Outcome::plain(to_value(&table)?);
            if let Some(v) = table.valid_total {
                if a.max_total as i64 > v {
                    out.warnings.push(format!("entries with i+j > {v} lie outside the conjectured range"));
                }
            }
            Ok(out)
        }
        Command::TautCount(a) => {
            let s = surface(&a.surface)?;
            let count = bps::taut_monomial_count(&s, a.k)?;
            let generators = bps::taut_generator_degrees(&s, a.k);
            Ok(Outcome::plain(json!({ "k": a.k, "count": count, "generators": generators })))
        }
        Command::Gap(a) => {
            let report = hilbert::general_type_gap(a.chi_o, a.q, a.k2, a.n)?;
            let reducible = report.reducibility_certified;
            Ok(Outcome::plain(to_value(&report)?).flag("reducible", reducible))
        }
    }
}
