//! JSON encodings: rationals as `"num/den"` strings, exponents as
//! `{"rat", "irr"}`, series as degree-to-coefficient maps, domains as an
//! outer disc (or null for the whole line) with a list of holes.

use std::str::FromStr;

use berkpatch::berkovich::{BerkPoint, Disc, SwissCheese};
use berkpatch::exponent::Q;
use berkpatch::patching::Mat2;
use berkpatch::poly::RationalFunction;
use berkpatch::series::{AnnulusSeries, SeriesContext};
use berkpatch::Exponent;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::CliError;

pub type Res<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn field<'a>(v: &'a Value, key: &str) -> Res<&'a Value> {
    v.get(key).ok_or_else(|| usage(format!("missing field `{}`", key)))
}

pub fn array<'a>(v: &'a Value, what: &str) -> Res<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| usage(format!("`{}` must be an array", what)))
}

pub fn u64_of(v: &Value, what: &str) -> Res<u64> {
    v.as_u64().ok_or_else(|| usage(format!("`{}` must be a non-negative integer", what)))
}

pub fn bool_of(v: &Value, what: &str) -> Res<bool> {
    v.as_bool().ok_or_else(|| usage(format!("`{}` must be a boolean", what)))
}

pub fn str_of<'a>(v: &'a Value, what: &str) -> Res<&'a str> {
    v.as_str().ok_or_else(|| usage(format!("`{}` must be a string", what)))
}

pub fn rational(v: &Value) -> Res<BigRational> {
    match v {
        Value::String(s) => BigRational::from_str(s.trim()).map_err(|_| usage(format!("bad rational `{}`", s))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(BigInt::from(i)))
            .ok_or_else(|| usage(format!("bad rational {}", n))),
        _ => Err(usage(format!("expected a rational, found {}", v))),
    }
}

pub fn rational_out(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

fn small_rational(v: &Value) -> Res<Q> {
    match v {
        Value::String(s) => Q::from_str(s.trim()).map_err(|_| usage(format!("bad rational `{}`", s))),
        Value::Number(n) => n.as_i64().map(Q::from_integer).ok_or_else(|| usage(format!("bad rational {}", n))),
        _ => Err(usage(format!("expected a rational, found {}", v))),
    }
}

pub fn exponent(v: &Value) -> Res<Exponent> {
    match v {
        Value::Object(_) => {
            let rat = v.get("rat").map(small_rational).transpose()?.unwrap_or_else(|| Q::from_integer(0));
            let irr = v.get("irr").map(small_rational).transpose()?.unwrap_or_else(|| Q::from_integer(0));
            Ok(Exponent::new(rat, irr))
        }
        _ => Ok(Exponent::rational(small_rational(v)?)),
    }
}

pub fn exponent_out(e: &Exponent) -> Value {
    json!({ "rat": e.rat.to_string(), "irr": e.irr.to_string() })
}

pub fn opt_exponent_out(e: &Option<Exponent>) -> Value {
    e.as_ref().map_or(Value::Null, exponent_out)
}

pub fn point(v: &Value) -> Res<BerkPoint> {
    if v.as_str() == Some("infinity") {
        return Ok(BerkPoint::Infinity);
    }
    let center = rational(field(v, "center")?)?;
    match v.get("log_radius") {
        None | Some(Value::Null) => Ok(BerkPoint::rigid(center)),
        Some(e) => Ok(BerkPoint::eta(center, exponent(e)?)),
    }
}

pub fn point_out(pt: &BerkPoint) -> Value {
    let kind = match pt.kind() {
        berkpatch::berkovich::PointType::One => 1,
        berkpatch::berkovich::PointType::Two => 2,
        berkpatch::berkovich::PointType::Three => 3,
    };
    match pt {
        BerkPoint::Infinity => json!({ "center": "infinity", "log_radius": null, "type": kind }),
        BerkPoint::Finite { center, log_radius } => json!({
            "center": rational_out(center),
            "log_radius": opt_exponent_out(log_radius),
            "type": kind,
        }),
    }
}

fn disc(v: &Value) -> Res<Disc> {
    Ok(Disc::new(rational(field(v, "center")?)?, exponent(field(v, "log_radius")?)?))
}

fn disc_out(d: &Disc) -> Value {
    json!({ "center": rational_out(&d.center), "log_radius": exponent_out(&d.log_radius) })
}

pub fn domain(v: &Value, prime: u64) -> Res<SwissCheese> {
    let outer = match v.get("outer") {
        None | Some(Value::Null) => None,
        Some(o) => Some(disc(o)?),
    };
    let holes = match v.get("holes") {
        None => vec![],
        Some(h) => array(h, "holes")?.iter().map(disc).collect::<Res<_>>()?,
    };
    SwissCheese::new(prime, outer, holes).map_err(CliError::Domain)
}

pub fn domain_out(d: &SwissCheese) -> Value {
    json!({
        "outer": d.outer.as_ref().map_or(Value::Null, disc_out),
        "holes": d.holes.iter().map(disc_out).collect::<Vec<_>>(),
    })
}

pub fn series(v: &Value, ctx: &SeriesContext) -> Res<AnnulusSeries> {
    match v {
        Value::String(s) => AnnulusSeries::parse(ctx, s).map_err(|e| usage(format!("bad series `{}`: {}", s, e))),
        Value::Object(_) => {
            let terms = field(v, "terms")?
                .as_object()
                .ok_or_else(|| usage("`terms` must be an object"))?
                .iter()
                .map(|(k, c)| {
                    let d = k.parse::<i64>().map_err(|_| usage(format!("bad degree `{}`", k)))?;
                    Ok((d, rational(c)?))
                })
                .collect::<Res<Vec<_>>>()?;
            Ok(AnnulusSeries::from_terms(ctx, &terms))
        }
        _ => Err(usage(format!("expected a series, found {}", v))),
    }
}

pub fn series_out(s: &AnnulusSeries) -> Value {
    let mut terms = Map::new();
    for d in s.terms().keys() {
        terms.insert(d.to_string(), rational_out(&s.simplest_coefficient(*d)));
    }
    json!({ "terms": terms, "text": s.to_string() })
}

pub fn matrix(v: &Value, ctx: &SeriesContext) -> Res<Mat2> {
    let rows = array(v, "matrix")?;
    if rows.len() != 2 {
        return Err(usage("a matrix has two rows"));
    }
    let mut e = Vec::new();
    for r in rows {
        let r = array(r, "matrix row")?;
        if r.len() != 2 {
            return Err(usage("a matrix row has two entries"));
        }
        for x in r {
            e.push(series(x, ctx)?);
        }
    }
    let mut it = e.into_iter();
    let mut next = || it.next().expect("four entries");
    Ok(Mat2::new(next(), next(), next(), next()))
}

pub fn matrix_out(m: &Mat2) -> Value {
    json!([
        [series_out(&m.e[0][0]), series_out(&m.e[0][1])],
        [series_out(&m.e[1][0]), series_out(&m.e[1][1])],
    ])
}

pub fn rational_function(v: &Value) -> Res<RationalFunction> {
    match v {
        Value::String(s) => RationalFunction::parse(s).map_err(|e| usage(format!("bad rational function `{}`: {}", s, e))),
        Value::Number(_) => Ok(RationalFunction::constant(rational(v)?)),
        _ => Err(usage(format!("expected a rational function, found {}", v))),
    }
}

pub fn rational_function_out(f: &RationalFunction) -> Value {
    Value::String(f.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use berkpatch::exponent::q;

    #[test]
    fn rationals_and_exponents() {
        assert_eq!(rational(&json!("-6/4")).unwrap(), BigRational::new((-3).into(), 2.into()));
        assert_eq!(rational(&json!(7)).unwrap(), BigRational::from_integer(7.into()));
        assert!(rational(&json!("1/0x")).is_err());
        assert_eq!(rational_out(&BigRational::new(3.into(), 1.into())), json!("3"));
        let e = exponent(&json!({ "rat": "1/2", "irr": "-1/4" })).unwrap();
        assert_eq!(e, Exponent::new(q(1, 2), q(-1, 4)));
        assert_eq!(exponent(&exponent_out(&e)).unwrap(), e);
        assert_eq!(exponent(&json!("2")).unwrap(), Exponent::integer(2));
    }

    #[test]
    fn points_and_domains() {
        assert!(matches!(point(&json!("infinity")).unwrap(), BerkPoint::Infinity));
        let pt = point(&json!({ "center": "1/3", "log_radius": { "rat": "0", "irr": "1/2" } })).unwrap();
        assert_eq!(point_out(&pt)["type"], json!(3));
        let rigid = point(&json!({ "center": "2" })).unwrap();
        assert!(rigid.same_point(&BerkPoint::rigid(BigRational::from_integer(2.into())), 3));
        let d = json!({ "outer": { "center": "0", "log_radius": "0" }, "holes": [{ "center": "1", "log_radius": "1" }] });
        assert_eq!(domain_out(&domain(&d, 3).unwrap()), json!({
            "outer": { "center": "0", "log_radius": { "rat": "0", "irr": "0" } },
            "holes": [{ "center": "1", "log_radius": { "rat": "1", "irr": "0" } }],
        }));
        // The hole must lie inside the outer disc.
        let bad = json!({ "outer": { "center": "0", "log_radius": "1" }, "holes": [{ "center": "1", "log_radius": "2" }] });
        assert!(matches!(domain(&bad, 3), Err(CliError::Domain(_))));
    }

    #[test]
    fn series_forms_agree() {
        let ctx = SeriesContext::new(5, Exponent::zero(), 32).unwrap();
        let a = series(&json!("2*t^-1 + 1/3"), &ctx).unwrap();
        let b = series(&json!({ "terms": { "-1": "2", "0": "1/3" } }), &ctx).unwrap();
        assert_eq!(a, b);
        assert_eq!(series_out(&a), json!({ "terms": { "-1": "2", "0": "1/3" }, "text": "2*t^-1 + 1/3" }));
        assert_eq!(series(&series_out(&a), &ctx).unwrap(), a);
        assert!(series(&json!({ "terms": { "x": "1" } }), &ctx).is_err());
    }
}
