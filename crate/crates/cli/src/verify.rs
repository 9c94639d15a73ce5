//! Replay of emitted certificates: every identity a response asserts is
//! recomputed from the request and the response alone, without searching.

use berkpatch::berkovich::{meet, BerkPoint, NiceCover, SwissCheese};
use berkpatch::finite_field::{evaluate_form, isotropic_finite_field, FiniteField};
use berkpatch::padic::legendre;
use berkpatch::patching::{half_window, residual_valuation, supported_on, ApproximationResult, Side};
use berkpatch::quadratic::{
    evaluate_rational_form, local_isotropy_at_point, springer_split, u_bound, unit_block_decomposition,
    verify_decomposition, verify_padic_witness, AbstractField, Block, BlockDecomposition, BlockMember,
    DecompositionMode, FormField, PadicField, PointField, PointKind, Verdict, Witness, WitnessKind,
};
use berkpatch::series::SeriesContext;
use berkpatch::Exponent;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::codec::*;
use crate::commands::{self, prime};
use crate::{CliError, Diag, Options};

struct Checks(Vec<(String, bool)>);

impl Checks {
    fn new() -> Self {
        Checks(Vec::new())
    }

    fn add(&mut self, name: impl Into<String>, ok: bool) {
        self.0.push((name.into(), ok));
    }

    fn finish(self) -> Res<Value> {
        let failed: Vec<&str> = self.0.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
        if !failed.is_empty() {
            return Err(CliError::Rejected(failed.join(", ")));
        }
        Ok(json!({
            "verified": true,
            "checks": self.0.iter().map(|(n, ok)| json!({ "name": n, "ok": ok })).collect::<Vec<_>>(),
        }))
    }
}

/// `payload` is `{"payload": <original payload>, "result": <result>}`; a
/// full response document is accepted in place of the bare result.
pub(crate) fn replay(command: &str, payload: &Value, opts: &Options) -> Res<Value> {
    let original = field(payload, "payload")?;
    let mut result = field(payload, "result")?;
    if let Some(inner) = result.get("status").and(result.get("result")) {
        result = inner;
    }
    let mut checks = Checks::new();
    match command {
        "isotropy" => isotropy(original, result, opts, &mut checks)?,
        "decompose" => decompose(original, result, opts, &mut checks)?,
        "split" => split(original, result, opts, &mut checks)?,
        "approximate" => approximate(original, result, opts, &mut checks)?,
        "factor" => factor(original, result, opts, &mut checks)?,
        "refine" | "cover-with-s" | "parity" => cover(command, original, result, opts, &mut checks)?,
        "patch" => patch(original, result, opts, &mut checks)?,
        // Closed-form answers: recomputing is the replay.
        "ubound" | "classify" => {
            let fresh = commands::run(command, original, opts, &mut Diag::default())?;
            checks.add("recomputed", &fresh == result);
        }
        _ => return Err(CliError::Usage(format!("unknown command `{}`", command))),
    }
    checks.finish()
}

fn verdict(result: &Value) -> Res<Verdict> {
    match str_of(field(result, "verdict")?, "verdict")? {
        "isotropic" => Ok(Verdict::Isotropic),
        "anisotropic" => Ok(Verdict::Anisotropic),
        "inconclusive" => Ok(Verdict::Inconclusive),
        other => Err(CliError::Usage(format!("unknown verdict `{}`", other))),
    }
}

fn witness_kind(result: &Value) -> Res<WitnessKind> {
    match result.get("witness_kind").and_then(Value::as_str) {
        Some("approximate") => Ok(WitnessKind::Approximate { residual_valuation: exponent(field(result, "residual_valuation")?)? }),
        _ => Ok(WitnessKind::Exact),
    }
}

fn guaranteed(result: &Value) -> bool {
    result.get("guaranteed_without_witness").and_then(Value::as_bool).unwrap_or(false)
}

/// Anisotropy over `Q_p` (odd `p`) holds exactly when both residue forms
/// of the valuation-parity split are anisotropic over `F_p`.
fn padic_anisotropic(form: &[BigRational], p: u64) -> Res<bool> {
    if form.iter().any(|a| a.is_zero()) {
        return Ok(false);
    }
    let split = springer_split(form, p)?;
    let pb = BigInt::from(p);
    let residue = |u: &BigRational| -> BigInt {
        let inv = berkpatch::padic::mod_inverse(u.denom(), &pb).unwrap_or_default();
        (u.numer() * inv).modpow(&BigInt::one(), &pb)
    };
    for part in [&split.q1, &split.q2] {
        match part.len() {
            0 | 1 => {}
            2 => {
                let d = -(residue(&part[0].unit) * residue(&part[1].unit));
                if legendre(&d, p) == 1 {
                    return Ok(false);
                }
            }
            _ => return Ok(false),
        }
    }
    Ok(true)
}

fn isotropy(original: &Value, result: &Value, opts: &Options, checks: &mut Checks) -> Res<()> {
    let p = prime(original, opts)?;
    let claimed = verdict(result)?;
    let field_name = original.get("field").and_then(Value::as_str).unwrap_or("qp");
    let has_witness = !matches!(result.get("witness"), None | Some(Value::Null));
    match field_name {
        "qp" => {
            let form = commands::rationals(field(original, "form")?, "form")?;
            if has_witness {
                let coords = commands::rationals(field(result, "witness")?, "witness")?;
                let kind = witness_kind(result)?;
                let min = match &kind {
                    WitnessKind::Approximate { residual_valuation } => residual_valuation.ceil(),
                    WitnessKind::Exact => 0,
                };
                let w = Witness { coords, kind };
                checks.add("witness", claimed == Verdict::Isotropic && verify_padic_witness(&form, p, &w, min)?);
            } else if claimed == Verdict::Isotropic {
                checks.add("dimension_bound", guaranteed(result) && form.len() > 4);
            } else if claimed == Verdict::Anisotropic {
                checks.add("residue_forms_anisotropic", padic_anisotropic(&form, p)?);
            }
        }
        "point" => {
            let form = commands::rational_functions(field(original, "form")?, "form")?;
            let center = original.get("center").map_or(Ok(BigRational::zero()), rational)?;
            let log_radius = match original.get("log_radius") {
                None | Some(Value::Null) => None,
                Some(e) => Some(exponent(e)?),
            };
            if has_witness {
                let coords = commands::rational_functions(field(result, "witness")?, "witness")?;
                let ok = claimed == Verdict::Isotropic && point_witness(&form, &coords, p, &center, log_radius)?;
                checks.add("witness", ok);
            } else if claimed == Verdict::Isotropic {
                let ok = guaranteed(result) && point_dimension_bound(&form, original, p, &center, log_radius)?;
                checks.add("dimension_bound", ok);
            } else if claimed == Verdict::Anisotropic {
                // Only binary forms are declared anisotropic; the square
                // class decision is closed form.
                let fresh = local_isotropy_at_point(
                    &form,
                    p,
                    &center,
                    log_radius,
                    &commands::profile(original)?,
                    Default::default(),
                )?;
                checks.add("square_class", form.len() <= 2 && fresh.verdict == Verdict::Anisotropic);
            }
        }
        "finite" => {
            let gf = FiniteField::new(u64_of(field(original, "order")?, "order")?)?;
            let form: Vec<u32> = array(field(original, "form")?, "form")?
                .iter()
                .map(|v| u64_of(v, "form entry").map(|x| x as u32))
                .collect::<Res<_>>()?;
            if has_witness {
                let w: Vec<u32> = array(field(result, "witness")?, "witness")?
                    .iter()
                    .map(|v| u64_of(v, "witness entry").map(|x| x as u32))
                    .collect::<Res<_>>()?;
                let ok = w.len() == form.len() && w.iter().any(|x| *x != 0) && evaluate_form(&gf, &form, &w) == 0;
                checks.add("witness", ok);
            } else {
                let ok = form.len() <= 2 && !isotropic_finite_field(&gf, &form)?.isotropic;
                checks.add("anisotropic", ok);
            }
        }
        other => return Err(CliError::Usage(format!("unknown field `{}`", other))),
    }
    if claimed == Verdict::Inconclusive {
        checks.add("no_claim", !has_witness);
    }
    Ok(())
}

/// A witness at a point is exact, or its value cancels below the smallest
/// term, which is what a residue-level zero means.
fn point_witness(
    form: &[berkpatch::poly::RationalFunction],
    x: &[berkpatch::poly::RationalFunction],
    p: u64,
    center: &BigRational,
    log_radius: Option<Exponent>,
) -> Res<bool> {
    if x.len() != form.len() || x.iter().all(|c| c.is_zero()) {
        return Ok(false);
    }
    let Some(e) = log_radius else {
        let at = |f: &berkpatch::poly::RationalFunction| {
            f.eval(center).ok_or_else(|| CliError::Usage(format!("pole of {} at the point", f)))
        };
        let a = form.iter().map(at).collect::<Res<Vec<_>>>()?;
        let xs = x.iter().map(at).collect::<Res<Vec<_>>>()?;
        if evaluate_rational_form(&a, &xs).is_zero() {
            return Ok(xs.iter().any(|c| !c.is_zero()));
        }
        let w = Witness { coords: xs, kind: WitnessKind::Approximate { residual_valuation: Exponent::integer(16) } };
        return Ok(verify_padic_witness(&a, p, &w, 1)?);
    };
    let field = PointField::new(p, center.clone(), e)?;
    let mut value = berkpatch::poly::RationalFunction::zero();
    let mut smallest: Option<Exponent> = None;
    for (a, xi) in form.iter().zip(x) {
        let term = a.mul(&xi.mul(xi));
        if !term.is_zero() {
            let v = field.log_norm(&term)?;
            smallest = Some(smallest.map_or(v, |s| s.min(v)));
        }
        value = value.add(&term);
    }
    Ok(match smallest {
        None => false,
        Some(s) => value.is_zero() || field.log_norm(&value)? > s,
    })
}

fn point_dimension_bound(
    form: &[berkpatch::poly::RationalFunction],
    original: &Value,
    p: u64,
    center: &BigRational,
    log_radius: Option<Exponent>,
) -> Res<bool> {
    let bound = u_bound(&commands::profile(original)?)?.function_field_bound;
    if form.len() as u64 > bound {
        return Ok(true);
    }
    let Some(e) = log_radius else {
        return Ok(form.len() > 4);
    };
    let field = PointField::new(p, center.clone(), e)?;
    if !matches!(field.kind, PointKind::Type2 { .. }) {
        return Ok(false);
    }
    let dec = unit_block_decomposition(&field, form, DecompositionMode::Free)?;
    Ok(dec.blocks.iter().any(|b| b.members.len() >= 5))
}

fn blocks_from<E>(result: &Value, elem: impl Fn(&Value) -> Res<E>) -> Res<BlockDecomposition<E>> {
    let blocks = array(field(result, "blocks")?, "blocks")?
        .iter()
        .map(|b| {
            let members = array(field(b, "members")?, "members")?
                .iter()
                .map(|m| {
                    Ok(BlockMember {
                        index: u64_of(field(m, "index")?, "index")? as usize,
                        unit: elem(field(m, "unit")?)?,
                        square: elem(field(m, "square")?)?,
                    })
                })
                .collect::<Res<Vec<_>>>()?;
            Ok(Block { scale: elem(field(b, "scale")?)?, members })
        })
        .collect::<Res<Vec<_>>>()?;
    Ok(BlockDecomposition { blocks, words: vec![] })
}

fn check_blocks<F: FormField>(
    f: &F,
    form: &[F::Elem],
    result: &Value,
    elem: impl Fn(&Value) -> Res<F::Elem>,
    checks: &mut Checks,
) -> Res<()> {
    let dec = blocks_from(result, elem)?;
    checks.add("certificates", verify_decomposition(f, form, &dec)?);
    let general = result.get("mode").and_then(Value::as_str) == Some("general");
    let bound = 1usize << (f.rank() + usize::from(general));
    checks.add("block_bound", dec.blocks.len() <= bound);
    Ok(())
}

fn decompose(original: &Value, result: &Value, opts: &Options, checks: &mut Checks) -> Res<()> {
    match original.get("field").and_then(Value::as_str).unwrap_or("qp") {
        "qp" => {
            let f = PadicField::new(prime(original, opts)?)?;
            let form = commands::rationals(field(original, "form")?, "form")?;
            check_blocks(&f, &form, result, rational, checks)
        }
        "point" => {
            let f = commands::point_field(original, opts)?;
            let form = commands::rational_functions(field(original, "form")?, "form")?;
            check_blocks(&f, &form, result, rational_function, checks)
        }
        "abstract" => {
            let f = AbstractField { n: u64_of(field(original, "n")?, "n")? as usize };
            let form = array(field(original, "form")?, "form")?.iter().map(commands::monomial).collect::<Res<Vec<_>>>()?;
            check_blocks(&f, &form, result, commands::monomial, checks)
        }
        other => Err(CliError::Usage(format!("unknown field `{}`", other))),
    }
}

fn split(original: &Value, result: &Value, opts: &Options, checks: &mut Checks) -> Res<()> {
    let (settings, text) = match original {
        Value::String(_) => (&Value::Null, original),
        _ => (original, field(original, "series")?),
    };
    let ctx = commands::series_context(settings, opts)?;
    let s = series(text, &ctx)?;
    let plus = series(field(result, "plus")?, &ctx)?;
    let minus = series(field(result, "minus")?, &ctx)?;
    checks.add("sum", plus.add(&minus).sub(&s).is_zero());
    checks.add("plus_support", plus.min_degree().is_none_or(|d| d >= 0));
    checks.add("minus_support", minus.max_degree().is_none_or(|d| d < 0));
    Ok(())
}

fn approximate(original: &Value, result: &Value, opts: &Options, checks: &mut Checks) -> Res<()> {
    let prob = commands::approximate_problem(original, opts)?;
    let ctx = prob.target[0].context().clone();
    let list = |key: &str| -> Res<Vec<_>> { array(field(result, key)?, key)?.iter().map(|s| series(s, &ctx)).collect() };
    let res = ApproximationResult { u: list("u")?, v: list("v")?, trace: vec![] };
    let dim = prob.chart.dim();
    checks.add("dimension", res.u.len() == dim && res.v.len() == dim);
    if res.u.len() != dim || res.v.len() != dim {
        return Ok(());
    }
    checks.add("u_support", res.u.iter().all(|s| s.min_degree().is_none_or(|d| d >= 0)));
    checks.add("v_support", res.v.iter().all(|s| s.max_degree().is_none_or(|d| d < 0)));
    let residual = residual_valuation(&prob, &res)?;
    checks.add("residual", residual.is_none_or(|v| v >= prob.stop_valuation));
    Ok(())
}

fn factor(original: &Value, result: &Value, opts: &Options, checks: &mut Checks) -> Res<()> {
    let ctx = commands::series_context(original, opts)?;
    let g = matrix(field(original, "matrix")?, &ctx)?;
    let g1 = matrix(field(result, "g1")?, &ctx)?;
    let g2 = matrix(field(result, "g2")?, &ctx)?;
    checks.add("g1_inner", supported_on(&g1, Side::Inner));
    checks.add("g2_outer", supported_on(&g2, Side::Outer));
    let half = half_window(ctx.precision);
    checks.add("product", g1.mul(&g2).sub(&g).valuation().is_none_or(|v| v >= half));
    Ok(())
}

fn bits(v: &Value, n: usize) -> Res<Option<Vec<u8>>> {
    if v.is_null() {
        return Ok(None);
    }
    let b = array(v, "parity")?.iter().map(|x| u64_of(x, "parity bit").map(|b| b as u8)).collect::<Res<Vec<_>>>()?;
    if b.len() != n || b.iter().any(|x| *x > 1) {
        return Err(CliError::Usage("parity must list one bit per element".into()));
    }
    Ok(Some(b))
}

/// Pairwise meets are empty or one type 3 point, no point is in three
/// elements, and intersecting elements carry different bits.
fn nice_and_parity(elements: &[SwissCheese], parity: Option<&[u8]>, checks: &mut Checks) {
    let n = elements.len();
    let mut single_points = true;
    let mut bits_differ = true;
    let mut points: Vec<BerkPoint> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(m) = meet(&elements[i], &elements[j]) {
                match m.as_point() {
                    Some(pt) => points.push(pt),
                    None => single_points = false,
                }
                if let Some(b) = parity {
                    bits_differ &= b[i] != b[j];
                }
            }
        }
    }
    checks.add("pairwise_meets", single_points);
    checks.add("no_triple_points", points.iter().all(|pt| elements.iter().filter(|e| e.contains(pt)).count() <= 2));
    if parity.is_some() {
        checks.add("parity", bits_differ);
    }
}

fn cover(command: &str, original: &Value, result: &Value, opts: &Options, checks: &mut Checks) -> Res<()> {
    let p = prime(original, opts)?;
    let elements = if command == "parity" {
        commands::domains(field(original, "elements")?, p, "elements")?
    } else {
        commands::domains(field(result, "elements")?, p, "elements")?
    };
    let parity = bits(field(result, "parity")?, elements.len())?;
    nice_and_parity(&elements, parity.as_deref(), checks);
    match command {
        "refine" => {
            let input = commands::domains(field(original, "domains")?, p, "domains")?;
            checks.add("inside_inputs", elements.iter().all(|e| input.iter().any(|d| e.is_subset_of(d))));
            let samples = berkpatch::berkovich::sample_points(p, input.iter().chain(&elements));
            let covered = samples
                .iter()
                .filter(|pt| input.iter().any(|d| d.contains(pt)))
                .all(|pt| elements.iter().any(|e| e.contains(pt)));
            checks.add("covers_inputs", covered);
        }
        "cover-with-s" => {
            let a = domain(field(original, "domain")?, p)?;
            checks.add("inside_domain", elements.iter().all(|e| e.is_subset_of(&a)));
            let s = array(field(original, "points")?, "points")?.iter().map(point).collect::<Res<Vec<_>>>()?;
            let found = NiceCover::from_elements(p, elements.clone()).intersection_points;
            let same = found.iter().all(|x| s.iter().any(|y| x.same_point(y, p)))
                && s.iter().all(|y| found.iter().any(|x| x.same_point(y, p)));
            checks.add("intersection_points", same);
        }
        _ => {}
    }
    Ok(())
}

fn patch(original: &Value, result: &Value, opts: &Options, checks: &mut Checks) -> Res<()> {
    let p = prime(original, opts)?;
    let ts = commands::transitions(field(original, "transitions")?, p, opts)?;
    let half = half_window(opts.precision);
    let mats = array(field(result, "elements")?, "elements")?;
    let list = array(field(result, "checks")?, "checks")?;
    checks.add("every_transition", list.len() == ts.len());
    for c in list {
        let pt = point(field(c, "point")?)?;
        let sides = array(field(c, "sides")?, "sides")?;
        let [u0, u1] = &sides[..] else {
            return Err(CliError::Usage("`sides` has two indices".into()));
        };
        let (u0, u1) = (u64_of(u0, "side")? as usize, u64_of(u1, "side")? as usize);
        let (Some(m0), Some(m1)) = (mats.get(u0), mats.get(u1)) else {
            return Err(CliError::Usage("side index out of range".into()));
        };
        let Some(t) = ts.iter().find(|t| t.point.same_point(&pt, p)) else {
            checks.add(format!("transition at {}", pt), false);
            continue;
        };
        let ctx: &SeriesContext = t.g.context();
        let (g0, g1) = (matrix(m0, ctx)?, matrix(m1, ctx)?);
        let ok = g0.mul(&g1.adjugate()).sub(&t.g).valuation().is_none_or(|v| v >= half);
        checks.add(format!("identity at {}", pt), ok);
    }
    Ok(())
}
