//! One handler per command. Each validates its payload, calls the engine
//! and encodes the result together with its certificate.

use berkpatch::berkovich::{classify_point, cover_with_intersections, nice_refinement, parity_function, NiceCover};
use berkpatch::finite_field::{isotropic_finite_field, FiniteField};
use berkpatch::patching::{
    factor_matrix, laurent_split, patch_over_cover, residual_valuation, successive_approximation, supported_on, Chart,
    PatchingProblem, PeelOrder, Side, Transition,
};
use berkpatch::quadratic::{
    isotropic_padic, local_isotropy_at_point, u_bound, unit_block_decomposition, verify_decomposition, AbstractField,
    BlockDecomposition, DecompositionMode, FieldProfile, FormField, IsotropyCertificate, MonomialElement, PadicField,
    PointField, SearchLimits, Verdict, WitnessKind,
};
use berkpatch::series::{AnnulusSeries, SeriesContext};
use berkpatch::{Exponent, ValueVector};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::codec::*;
use crate::{CliError, Diag, Options, DEFAULT_PRIME};

pub(crate) fn run(command: &str, payload: &Value, opts: &Options, diag: &mut Diag) -> Res<Value> {
    match command {
        "isotropy" => isotropy(payload, opts, diag),
        "decompose" => decompose(payload, opts),
        "ubound" => ubound(payload),
        "classify" => classify(payload, opts),
        "refine" => refine(payload, opts, diag),
        "parity" => parity(payload, opts),
        "cover-with-s" => cover_with_s(payload, opts, diag),
        "split" => split(payload, opts, diag),
        "approximate" => approximate(payload, opts, diag),
        "factor" => factor(payload, opts, diag),
        "patch" => patch(payload, opts, diag),
        _ => Err(CliError::Usage(format!("unknown command `{}`", command))),
    }
}

/// The `--prime` flag wins over a `prime` field in the payload.
pub(crate) fn prime(payload: &Value, opts: &Options) -> Res<u64> {
    match (opts.prime, payload.get("prime")) {
        (Some(p), _) => Ok(p),
        (None, Some(v)) => u64_of(v, "prime"),
        (None, None) => Ok(DEFAULT_PRIME),
    }
}

fn form_field(payload: &Value) -> Res<&str> {
    payload.get("field").map_or(Ok("qp"), |v| str_of(v, "field"))
}

pub(crate) fn rationals(v: &Value, what: &str) -> Res<Vec<BigRational>> {
    array(v, what)?.iter().map(rational).collect()
}

pub(crate) fn rational_functions(v: &Value, what: &str) -> Res<Vec<berkpatch::poly::RationalFunction>> {
    array(v, what)?.iter().map(rational_function).collect()
}

pub(crate) fn profile(payload: &Value) -> Res<FieldProfile> {
    match payload.get("profile") {
        None | Some(Value::Null) => Ok(FieldProfile::padic()),
        Some(v) => Ok(FieldProfile {
            n: u64_of(field(v, "n")?, "n")? as u32,
            free: bool_of(field(v, "free")?, "free")?,
            residue_us: u64_of(field(v, "residue_us")?, "residue_us")?,
        }),
    }
}

fn opt_log_radius(payload: &Value) -> Res<Option<Exponent>> {
    match payload.get("log_radius") {
        None | Some(Value::Null) => Ok(None),
        Some(e) => Ok(Some(exponent(e)?)),
    }
}

fn certificate_out<E>(cert: &IsotropyCertificate<E>, elem: impl Fn(&E) -> Value) -> Value {
    let (witness, kind, residual) = match &cert.witness {
        None => (Value::Null, Value::Null, Value::Null),
        Some(w) => {
            let (kind, residual) = match &w.kind {
                WitnessKind::Exact => ("exact", Value::Null),
                WitnessKind::Approximate { residual_valuation } => ("approximate", exponent_out(residual_valuation)),
            };
            (Value::Array(w.coords.iter().map(&elem).collect()), json!(kind), residual)
        }
    };
    json!({
        "verdict": cert.verdict.to_string(),
        "witness": witness,
        "witness_kind": kind,
        "residual_valuation": residual,
        "guaranteed_without_witness": cert.guaranteed_without_witness,
        "trace": cert.trace.iter().map(|t| json!({ "stage": t.stage, "detail": t.detail })).collect::<Vec<_>>(),
    })
}

fn note_inconclusive(verdict: Verdict, diag: &mut Diag) {
    if verdict == Verdict::Inconclusive {
        diag.warnings.push("inconclusive oracle: no witness found within the search limits".into());
    }
}

fn isotropy(payload: &Value, opts: &Options, diag: &mut Diag) -> Res<Value> {
    let p = prime(payload, opts)?;
    match form_field(payload)? {
        "qp" => {
            let form = rationals(field(payload, "form")?, "form")?;
            let lift = payload.get("lift_precision").map_or(Ok(16), |v| u64_of(v, "lift_precision"))? as u32;
            let cert = isotropic_padic(&form, p, lift)?;
            note_inconclusive(cert.verdict, diag);
            Ok(certificate_out(&cert, rational_out))
        }
        "point" => {
            let form = rational_functions(field(payload, "form")?, "form")?;
            let center = payload.get("center").map_or(Ok(BigRational::from_integer(0.into())), rational)?;
            let mut limits = SearchLimits::default();
            if let Some(d) = payload.get("max_degree") {
                limits.max_degree = u64_of(d, "max_degree")? as usize;
            }
            if let Some(b) = payload.get("budget") {
                limits.budget = u64_of(b, "budget")?;
            }
            let cert =
                local_isotropy_at_point(&form, p, &center, opt_log_radius(payload)?, &profile(payload)?, limits)?;
            note_inconclusive(cert.verdict, diag);
            Ok(certificate_out(&cert, rational_function_out))
        }
        "finite" => {
            let order = u64_of(field(payload, "order")?, "order")?;
            let gf = FiniteField::new(order)?;
            let form = array(field(payload, "form")?, "form")?
                .iter()
                .map(|v| u64_of(v, "form entry").map(|x| x as u32))
                .collect::<Res<Vec<_>>>()?;
            let out = isotropic_finite_field(&gf, &form)?;
            Ok(json!({
                "verdict": if out.isotropic { "isotropic" } else { "anisotropic" },
                "witness": out.witness,
            }))
        }
        other => Err(CliError::Usage(format!("field must be `qp`, `point` or `finite`, got `{}`", other))),
    }
}

fn mode(payload: &Value, opts: &Options) -> Res<DecompositionMode> {
    match (opts.mode, payload.get("mode")) {
        (Some(m), _) => Ok(m),
        (None, Some(v)) => crate::parse_mode(str_of(v, "mode")?),
        (None, None) => Ok(DecompositionMode::Free),
    }
}

pub(crate) fn monomial(v: &Value) -> Res<MonomialElement> {
    let value = array(field(v, "value")?, "value")?
        .iter()
        .map(|x| {
            let r = rational(x)?;
            let (n, d) = (r.numer().try_into(), r.denom().try_into());
            match (n, d) {
                (Ok(n), Ok(d)) => Ok(berkpatch::Q::new(n, d)),
                _ => Err(CliError::Usage(format!("value coordinate {} too large", r))),
            }
        })
        .collect::<Res<Vec<_>>>()?;
    Ok(MonomialElement { unit: rational(field(v, "unit")?)?, value: ValueVector::new(value) })
}

pub(crate) fn monomial_out(m: &MonomialElement) -> Value {
    json!({
        "unit": rational_out(&m.unit),
        "value": m.value.0.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
    })
}

fn decomposition_out<F: FormField>(
    field: &F,
    coeffs: &[F::Elem],
    mode: DecompositionMode,
    elem: impl Fn(&F::Elem) -> Value,
) -> Res<Value> {
    let dec: BlockDecomposition<F::Elem> = unit_block_decomposition(field, coeffs, mode)?;
    let n = field.rank() as u32;
    let bound = match mode {
        DecompositionMode::Free => 1u64 << n,
        DecompositionMode::General => 1u64 << (n + 1),
    };
    let blocks: Vec<Value> = dec
        .blocks
        .iter()
        .map(|b| {
            json!({
                "scale": elem(&b.scale),
                "members": b.members.iter().map(|m| json!({
                    "index": m.index,
                    "unit": elem(&m.unit),
                    "square": elem(&m.square),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "mode": match mode { DecompositionMode::Free => "free", DecompositionMode::General => "general" },
        "rank": n,
        "bound": bound,
        "block_count": blocks.len(),
        "blocks": blocks,
        "certified": verify_decomposition(field, coeffs, &dec)?,
    }))
}

fn decompose(payload: &Value, opts: &Options) -> Res<Value> {
    let mode = mode(payload, opts)?;
    match form_field(payload)? {
        "qp" => {
            let f = PadicField::new(prime(payload, opts)?)?;
            let form = rationals(field(payload, "form")?, "form")?;
            decomposition_out(&f, &form, mode, rational_out)
        }
        "point" => {
            let f = point_field(payload, opts)?;
            let form = rational_functions(field(payload, "form")?, "form")?;
            decomposition_out(&f, &form, mode, rational_function_out)
        }
        "abstract" => {
            let f = AbstractField { n: u64_of(field(payload, "n")?, "n")? as usize };
            let form = array(field(payload, "form")?, "form")?.iter().map(monomial).collect::<Res<Vec<_>>>()?;
            decomposition_out(&f, &form, mode, monomial_out)
        }
        other => Err(CliError::Usage(format!("field must be `qp`, `point` or `abstract`, got `{}`", other))),
    }
}

pub(crate) fn point_field(payload: &Value, opts: &Options) -> Res<PointField> {
    let center = payload.get("center").map_or(Ok(BigRational::from_integer(0.into())), rational)?;
    let e = exponent(field(payload, "log_radius")?)?;
    Ok(PointField::new(prime(payload, opts)?, center, e)?)
}

fn ubound(payload: &Value) -> Res<Value> {
    let profile = FieldProfile {
        n: u64_of(field(payload, "n")?, "n")? as u32,
        free: bool_of(field(payload, "free")?, "free")?,
        residue_us: u64_of(field(payload, "residue_us")?, "residue_us")?,
    };
    let b = u_bound(&profile)?;
    Ok(json!({ "field": b.field_bound, "function_field": b.function_field_bound, "equality": b.equality }))
}

fn classify(payload: &Value, opts: &Options) -> Res<Value> {
    let p = prime(payload, opts)?;
    let pt = point(payload.get("point").unwrap_or(payload))?;
    let kind = match classify_point(&pt, p)? {
        berkpatch::berkovich::PointType::One => 1,
        berkpatch::berkovich::PointType::Two => 2,
        berkpatch::berkovich::PointType::Three => 3,
    };
    Ok(json!({ "type": kind }))
}

pub(crate) fn domains(v: &Value, p: u64, what: &str) -> Res<Vec<berkpatch::berkovich::SwissCheese>> {
    array(v, what)?.iter().map(|d| domain(d, p)).collect()
}

fn cover_out(cover: &NiceCover, diag: &mut Diag) -> Value {
    let parity = match parity_function(cover) {
        Ok(bits) => json!(bits),
        Err(e) => {
            diag.warnings.push(format!("no parity function: {}", e));
            Value::Null
        }
    };
    json!({
        "elements": cover.elements.iter().map(domain_out).collect::<Vec<_>>(),
        "intersection_points": cover.intersection_points.iter().map(point_out).collect::<Vec<_>>(),
        "parity": parity,
    })
}

fn refine(payload: &Value, opts: &Options, diag: &mut Diag) -> Res<Value> {
    let p = prime(payload, opts)?;
    let input = domains(field(payload, "domains")?, p, "domains")?;
    Ok(cover_out(&nice_refinement(&input)?, diag))
}

fn parity(payload: &Value, opts: &Options) -> Res<Value> {
    let p = prime(payload, opts)?;
    let cover = NiceCover::from_elements(p, domains(field(payload, "elements")?, p, "elements")?);
    Ok(json!({ "parity": parity_function(&cover)? }))
}

fn cover_with_s(payload: &Value, opts: &Options, diag: &mut Diag) -> Res<Value> {
    let p = prime(payload, opts)?;
    let a = domain(field(payload, "domain")?, p)?;
    let s = array(field(payload, "points")?, "points")?.iter().map(point).collect::<Res<Vec<_>>>()?;
    Ok(cover_out(&cover_with_intersections(&a, &s)?, diag))
}

/// Series context on the circle `log_radius` (default the unit circle).
pub(crate) fn series_context(payload: &Value, opts: &Options) -> Res<SeriesContext> {
    let rho = match payload.get("log_radius") {
        None | Some(Value::Null) => Exponent::zero(),
        Some(e) => exponent(e)?,
    };
    Ok(SeriesContext::new(prime(payload, opts)?, rho, opts.precision)?)
}

fn note_saturation<'a>(parts: impl IntoIterator<Item = &'a AnnulusSeries>, diag: &mut Diag) {
    if parts.into_iter().any(|s| s.saturated()) {
        diag.warnings.push("window saturation: coefficients were truncated beyond the precision window".into());
    }
}

fn split(payload: &Value, opts: &Options, diag: &mut Diag) -> Res<Value> {
    // A bare string is the series itself on the unit circle.
    let (settings, text) = match payload {
        Value::String(_) => (&Value::Null, payload),
        _ => (payload, field(payload, "series")?),
    };
    let s = series(text, &series_context(settings, opts)?)?;
    let parts = laurent_split(&s);
    note_saturation([&parts.plus, &parts.minus], diag);
    Ok(json!({ "plus": series_out(&parts.plus), "minus": series_out(&parts.minus) }))
}

pub(crate) fn chart(payload: &Value) -> Res<Chart> {
    match str_of(field(payload, "chart")?, "chart")? {
        "additive" => Ok(Chart::Additive),
        "gl1" => Ok(Chart::Gl1),
        "sl2" => Ok(Chart::Sl2),
        other => Err(CliError::Usage(format!("chart must be `additive`, `gl1` or `sl2`, got `{}`", other))),
    }
}

fn series_list(v: &Value, ctx: &SeriesContext, what: &str) -> Res<Vec<AnnulusSeries>> {
    array(v, what)?.iter().map(|s| series(s, ctx)).collect()
}

pub(crate) fn approximate_problem(payload: &Value, opts: &Options) -> Res<PatchingProblem> {
    let ctx = series_context(payload, opts)?;
    let target = series_list(field(payload, "target")?, &ctx, "target")?;
    Ok(PatchingProblem::new(chart(payload)?, target)?)
}

fn approximate(payload: &Value, opts: &Options, diag: &mut Diag) -> Res<Value> {
    let prob = approximate_problem(payload, opts)?;
    let res = successive_approximation(&prob)?;
    let residual = residual_valuation(&prob, &res)?;
    note_saturation(res.u.iter().chain(&res.v), diag);
    let trace: Vec<Value> = res
        .trace
        .iter()
        .map(|s| {
            diag.trace.push(format!(
                "step {}: val(u) {}, val(v) {}, val(increment) {}, val(residual) {}",
                s.step,
                show(&s.u_valuation),
                show(&s.v_valuation),
                show(&s.increment_valuation),
                show(&s.residual_valuation)
            ));
            json!({
                "step": s.step,
                "u_valuation": opt_exponent_out(&s.u_valuation),
                "v_valuation": opt_exponent_out(&s.v_valuation),
                "increment_valuation": opt_exponent_out(&s.increment_valuation),
                "residual_valuation": opt_exponent_out(&s.residual_valuation),
            })
        })
        .collect();
    let c = &prob.constants;
    Ok(json!({
        "u": res.u.iter().map(series_out).collect::<Vec<_>>(),
        "v": res.v.iter().map(series_out).collect::<Vec<_>>(),
        "trace": trace,
        "residual_valuation": opt_exponent_out(&residual),
        "constants": {
            "M": rational_out(&c.m),
            "d": rational_out(&c.d),
            "delta": rational_out(&c.delta),
            "eps_prime": rational_out(&c.eps_prime),
        },
    }))
}

fn show(v: &Option<Exponent>) -> String {
    v.map_or("inf".to_string(), |e| e.to_string())
}

fn factor(payload: &Value, opts: &Options, diag: &mut Diag) -> Res<Value> {
    let ctx = series_context(payload, opts)?;
    let g = matrix(field(payload, "matrix")?, &ctx)?;
    let f = factor_matrix(&g)?;
    note_saturation(f.g1.entries().chain(f.g2.entries()), diag);
    for s in &f.solve.trace {
        diag.trace.push(format!("step {}: val(residual) {}", s.step, show(&s.residual_valuation)));
    }
    Ok(json!({
        "g1": matrix_out(&f.g1),
        "g2": matrix_out(&f.g2),
        "residual_valuation": opt_exponent_out(&f.residual_valuation),
        "supports": {
            "g1_inner": supported_on(&f.g1, Side::Inner),
            "g2_outer": supported_on(&f.g2, Side::Outer),
        },
    }))
}

pub(crate) fn transitions(v: &Value, p: u64, opts: &Options) -> Res<Vec<Transition>> {
    array(v, "transitions")?
        .iter()
        .map(|t| {
            let pt = point(field(t, "point")?)?;
            let rho = match &pt {
                berkpatch::berkovich::BerkPoint::Finite { log_radius: Some(e), .. } => *e,
                _ => return Err(CliError::Usage(format!("transition point {} has no radius", pt))),
            };
            let ctx = SeriesContext::new(p, rho, opts.precision)?;
            Ok(Transition { point: pt, g: matrix(field(t, "matrix")?, &ctx)? })
        })
        .collect()
}

fn patch(payload: &Value, opts: &Options, diag: &mut Diag) -> Res<Value> {
    let p = prime(payload, opts)?;
    let cover = NiceCover::from_elements(p, domains(field(payload, "elements")?, p, "elements")?);
    let ts = transitions(field(payload, "transitions")?, p, opts)?;
    let order = match payload.get("order").map(|v| str_of(v, "order")).transpose()? {
        None | Some("first") => PeelOrder::First,
        Some("last") => PeelOrder::Last,
        Some(other) => return Err(CliError::Usage(format!("order must be `first` or `last`, got `{}`", other))),
    };
    let res = patch_over_cover(&cover, &ts, order, opts.precision)?;
    note_saturation(res.elements.iter().flat_map(|m| m.entries()), diag);
    let half = berkpatch::patching::half_window(opts.precision);
    Ok(json!({
        "elements": res.elements.iter().map(matrix_out).collect::<Vec<_>>(),
        "parity": res.parity,
        "checks": res.checks.iter().map(|c| json!({
            "point": point_out(&c.point),
            "sides": [c.sides.0, c.sides.1],
            "residual_valuation": opt_exponent_out(&c.residual_valuation),
        })).collect::<Vec<_>>(),
        "verified": res.verified(half),
    }))
}
