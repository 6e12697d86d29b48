//! Construction families: parameter schemas, validity predicates, closed-form
//! genera, expected element censuses and generator recipes.
//!
//! Families `T31` to `P36` are subgroups of the stabilizer of a self-polar
//! triangle; the `M2_*` families are subgroups of the stabilizer of a
//! pole-polar pair for even `q`.

mod census;
mod enumerate;
mod generators;
mod genus;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::{parse_err, Error, Result};

pub use census::{expected_centers, predicted_census, sylow_structure, Census};
pub use enumerate::{enumerate, MAX_TUPLES};
pub use generators::{generators, nonsplit_construction};
pub use genus::{genus, group_order, GenusRecord};
pub use validate::{validate, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    T31,
    P32,
    P33,
    P34,
    P35,
    P36,
    Psl22EvenN,
    Psl22Split,
    Psl22Nonsplit,
    CycQm,
    Eab,
    DihQm,
    A4,
    A5,
    Eabsd,
    Psl2f,
    Omega,
    CycQp,
    DihQp,
}

impl FamilyId {
    pub const ALL: [FamilyId; 19] = [
        FamilyId::T31,
        FamilyId::P32,
        FamilyId::P33,
        FamilyId::P34,
        FamilyId::P35,
        FamilyId::P36,
        FamilyId::Psl22EvenN,
        FamilyId::Psl22Split,
        FamilyId::Psl22Nonsplit,
        FamilyId::CycQm,
        FamilyId::Eab,
        FamilyId::DihQm,
        FamilyId::A4,
        FamilyId::A5,
        FamilyId::Eabsd,
        FamilyId::Psl2f,
        FamilyId::Omega,
        FamilyId::CycQp,
        FamilyId::DihQp,
    ];

    /// The families inside the stabilizer of a self-polar triangle.
    pub const TRIANGLE: [FamilyId; 6] = [
        FamilyId::T31,
        FamilyId::P32,
        FamilyId::P33,
        FamilyId::P34,
        FamilyId::P35,
        FamilyId::P36,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::T31 => "T31",
            FamilyId::P32 => "P32",
            FamilyId::P33 => "P33",
            FamilyId::P34 => "P34",
            FamilyId::P35 => "P35",
            FamilyId::P36 => "P36",
            FamilyId::Psl22EvenN => "M2_PSL22_EVEN_N",
            FamilyId::Psl22Split => "M2_PSL22_SPLIT",
            FamilyId::Psl22Nonsplit => "M2_PSL22_NONSPLIT",
            FamilyId::CycQm => "M2_CYC_QM",
            FamilyId::Eab => "M2_EAB",
            FamilyId::DihQm => "M2_DIH_QM",
            FamilyId::A4 => "M2_A4",
            FamilyId::A5 => "M2_A5",
            FamilyId::Eabsd => "M2_EABSD",
            FamilyId::Psl2f => "M2_PSL2F",
            FamilyId::Omega => "M2_OMEGA",
            FamilyId::CycQp => "M2_CYC_QP",
            FamilyId::DihQp => "M2_DIH_QP",
        }
    }

    /// Parameter keys in canonical order.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            FamilyId::T31 | FamilyId::CycQp => &["a", "b", "c", "e", "v"],
            FamilyId::P32 => &["a", "c", "e"],
            FamilyId::P33 => &["a", "c", "e", "l"],
            FamilyId::P34 => &["a", "e", "m"],
            FamilyId::P35 => &["a", "e", "l", "m"],
            FamilyId::P36 => &["a", "e"],
            FamilyId::CycQm | FamilyId::DihQm | FamilyId::DihQp => &["d", "omega"],
            FamilyId::Eab | FamilyId::Psl2f => &["f", "omega"],
            FamilyId::Eabsd => &["f", "d", "omega"],
            FamilyId::Psl22EvenN
            | FamilyId::Psl22Split
            | FamilyId::Psl22Nonsplit
            | FamilyId::A4
            | FamilyId::A5
            | FamilyId::Omega => &["omega"],
        }
    }

    /// Whether the family is defined for this `q` at all.
    pub fn applies_to(self, q: &crate::numthy::PrimePower) -> bool {
        let three_divides = (q.q() + 1).is_multiple_of(3);
        match self {
            FamilyId::T31 | FamilyId::P36 => true,
            FamilyId::P32 => q.is_even(),
            FamilyId::P33 => !q.is_even(),
            FamilyId::P34 => !three_divides,
            FamilyId::P35 => three_divides,
            _ => q.is_even(),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<FamilyId> {
        let t = s.trim();
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| parse_err!("unknown family {t:?}"))
    }
}

/// Parameters of a subgroup of the pointwise stabilizer of the triangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Torus {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub e: u64,
    /// One exponent per prime of `q + 1`, ascending.
    pub v: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyParams {
    T31(Torus),
    P32 { a: u64, c: u64, e: u64 },
    P33 { a: u64, c: u64, e: u64, l: u64 },
    P34 { a: u64, e: u64, m: u64 },
    P35 { a: u64, e: u64, l: u64, m: u64 },
    P36 { a: u64, e: u64 },
    Psl22EvenN { omega: u64 },
    Psl22Split { omega: u64 },
    Psl22Nonsplit { omega: u64 },
    CycQm { d: u64, omega: u64 },
    Eab { f: u64, omega: u64 },
    DihQm { d: u64, omega: u64 },
    A4 { omega: u64 },
    A5 { omega: u64 },
    Eabsd { f: u64, d: u64, omega: u64 },
    Psl2f { f: u64, omega: u64 },
    Omega { omega: u64 },
    CycQp(Torus),
    DihQp { d: u64, omega: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum ParamValue {
    Int(u64),
    List(Vec<u32>),
}

impl FamilyParams {
    pub fn family(&self) -> FamilyId {
        use FamilyParams as P;
        match self {
            P::T31(_) => FamilyId::T31,
            P::P32 { .. } => FamilyId::P32,
            P::P33 { .. } => FamilyId::P33,
            P::P34 { .. } => FamilyId::P34,
            P::P35 { .. } => FamilyId::P35,
            P::P36 { .. } => FamilyId::P36,
            P::Psl22EvenN { .. } => FamilyId::Psl22EvenN,
            P::Psl22Split { .. } => FamilyId::Psl22Split,
            P::Psl22Nonsplit { .. } => FamilyId::Psl22Nonsplit,
            P::CycQm { .. } => FamilyId::CycQm,
            P::Eab { .. } => FamilyId::Eab,
            P::DihQm { .. } => FamilyId::DihQm,
            P::A4 { .. } => FamilyId::A4,
            P::A5 { .. } => FamilyId::A5,
            P::Eabsd { .. } => FamilyId::Eabsd,
            P::Psl2f { .. } => FamilyId::Psl2f,
            P::Omega { .. } => FamilyId::Omega,
            P::CycQp(_) => FamilyId::CycQp,
            P::DihQp { .. } => FamilyId::DihQp,
        }
    }

    fn values(&self) -> Vec<ParamValue> {
        use FamilyParams as P;
        use ParamValue::Int;
        match self {
            P::T31(t) | P::CycQp(t) => {
                vec![
                    Int(t.a),
                    Int(t.b),
                    Int(t.c),
                    Int(t.e),
                    ParamValue::List(t.v.clone()),
                ]
            }
            P::P32 { a, c, e } => vec![Int(*a), Int(*c), Int(*e)],
            P::P33 { a, c, e, l } => vec![Int(*a), Int(*c), Int(*e), Int(*l)],
            P::P34 { a, e, m } => vec![Int(*a), Int(*e), Int(*m)],
            P::P35 { a, e, l, m } => vec![Int(*a), Int(*e), Int(*l), Int(*m)],
            P::P36 { a, e } => vec![Int(*a), Int(*e)],
            P::CycQm { d, omega } | P::DihQm { d, omega } | P::DihQp { d, omega } => {
                vec![Int(*d), Int(*omega)]
            }
            P::Eab { f, omega } | P::Psl2f { f, omega } => vec![Int(*f), Int(*omega)],
            P::Eabsd { f, d, omega } => vec![Int(*f), Int(*d), Int(*omega)],
            P::Psl22EvenN { omega }
            | P::Psl22Split { omega }
            | P::Psl22Nonsplit { omega }
            | P::A4 { omega }
            | P::A5 { omega }
            | P::Omega { omega } => vec![Int(*omega)],
        }
    }

    fn from_values(
        family: FamilyId,
        mut map: BTreeMap<String, ParamValue>,
    ) -> Result<FamilyParams> {
        use FamilyParams as P;
        let keys = family.keys();
        if let Some(k) = map.keys().find(|k| !keys.contains(&k.as_str())) {
            return Err(parse_err!(
                "{family} has no parameter {k:?}; expected {}",
                keys.join(",")
            ));
        }
        let v = match map.remove("v") {
            Some(ParamValue::List(v)) => Some(v),
            Some(ParamValue::Int(x)) => Some(vec![
                u32::try_from(x).map_err(|_| parse_err!("v entry {x} out of range"))?
            ]),
            None => None,
        };
        let mut int = |k: &str| -> Result<u64> {
            match map.remove(k) {
                Some(ParamValue::Int(x)) if x > 0 => Ok(x),
                Some(ParamValue::Int(_)) => Err(parse_err!("parameter {k} must be positive")),
                Some(ParamValue::List(_)) => Err(parse_err!("parameter {k} must be an integer")),
                None => Err(parse_err!("{family} needs parameter {k}")),
            }
        };
        Ok(match family {
            FamilyId::T31 | FamilyId::CycQp => {
                let t = Torus {
                    a: int("a")?,
                    b: int("b")?,
                    c: int("c")?,
                    e: int("e")?,
                    v: v.ok_or_else(|| parse_err!("{family} needs parameter v"))?,
                };
                if family == FamilyId::T31 {
                    P::T31(t)
                } else {
                    P::CycQp(t)
                }
            }
            FamilyId::P32 => P::P32 {
                a: int("a")?,
                c: int("c")?,
                e: int("e")?,
            },
            FamilyId::P33 => P::P33 {
                a: int("a")?,
                c: int("c")?,
                e: int("e")?,
                l: int("l")?,
            },
            FamilyId::P34 => P::P34 {
                a: int("a")?,
                e: int("e")?,
                m: int("m")?,
            },
            FamilyId::P35 => P::P35 {
                a: int("a")?,
                e: int("e")?,
                l: int("l")?,
                m: int("m")?,
            },
            FamilyId::P36 => P::P36 {
                a: int("a")?,
                e: int("e")?,
            },
            FamilyId::Psl22EvenN => P::Psl22EvenN {
                omega: int("omega")?,
            },
            FamilyId::Psl22Split => P::Psl22Split {
                omega: int("omega")?,
            },
            FamilyId::Psl22Nonsplit => P::Psl22Nonsplit {
                omega: int("omega")?,
            },
            FamilyId::CycQm => P::CycQm {
                d: int("d")?,
                omega: int("omega")?,
            },
            FamilyId::Eab => P::Eab {
                f: int("f")?,
                omega: int("omega")?,
            },
            FamilyId::DihQm => P::DihQm {
                d: int("d")?,
                omega: int("omega")?,
            },
            FamilyId::A4 => P::A4 {
                omega: int("omega")?,
            },
            FamilyId::A5 => P::A5 {
                omega: int("omega")?,
            },
            FamilyId::Eabsd => P::Eabsd {
                f: int("f")?,
                d: int("d")?,
                omega: int("omega")?,
            },
            FamilyId::Psl2f => P::Psl2f {
                f: int("f")?,
                omega: int("omega")?,
            },
            FamilyId::Omega => P::Omega {
                omega: int("omega")?,
            },
            FamilyId::DihQp => P::DihQp {
                d: int("d")?,
                omega: int("omega")?,
            },
        })
    }

    /// Parses `"a=2,b=2,c=2,e=12,v=0:1"` for the given family.
    pub fn parse(family: FamilyId, s: &str) -> Result<FamilyParams> {
        let mut map = BTreeMap::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| parse_err!("expected key=value, found {item:?}"))?;
            let key = canonical_key(k.trim());
            let value = parse_value(&key, v.trim())?;
            if map.insert(key.clone(), value).is_some() {
                return Err(parse_err!("parameter {key} given twice"));
            }
        }
        Self::from_values(family, map)
    }

    /// Accepts the object printed by [`FamilyParams::to_json`].
    pub fn from_json(family: FamilyId, value: &Value) -> Result<FamilyParams> {
        let obj = value
            .as_object()
            .ok_or_else(|| parse_err!("parameters must be a JSON object"))?;
        let mut map = BTreeMap::new();
        for (k, v) in obj {
            let key = canonical_key(k);
            let parsed =
                match v {
                    Value::Number(n) => ParamValue::Int(n.as_u64().ok_or_else(|| {
                        parse_err!("parameter {key} must be a non-negative integer")
                    })?),
                    Value::Array(items) => ParamValue::List(
                        items
                            .iter()
                            .map(|x| {
                                x.as_u64()
                                    .and_then(|x| u32::try_from(x).ok())
                                    .ok_or_else(|| {
                                        parse_err!("v entries must be small non-negative integers")
                                    })
                            })
                            .collect::<Result<_>>()?,
                    ),
                    Value::String(s) => parse_value(&key, s)?,
                    _ => return Err(parse_err!("unsupported value for parameter {key}")),
                };
            map.insert(key, parsed);
        }
        Self::from_values(family, map)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        for (k, v) in self.family().keys().iter().zip(self.values()) {
            let val = match v {
                ParamValue::Int(x) => json!(x),
                ParamValue::List(xs) => json!(xs),
            };
            obj.insert((*k).to_string(), val);
        }
        Value::Object(obj)
    }
}

fn canonical_key(k: &str) -> String {
    match k {
        "ω" | "w" => "omega".to_string(),
        "ℓ" => "l".to_string(),
        other => other.to_string(),
    }
}

fn parse_value(key: &str, v: &str) -> Result<ParamValue> {
    let int = |t: &str| -> Result<u64> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_err!(
                "parameter {key}: {t:?} is not a non-negative integer"
            ));
        }
        t.parse()
            .map_err(|_| parse_err!("parameter {key}: {t:?} out of range"))
    };
    if key == "v" {
        let items = v
            .split(':')
            .map(|t| {
                let x = int(t.trim())?;
                u32::try_from(x).map_err(|_| parse_err!("v entry {x} out of range"))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(ParamValue::List(items))
    } else {
        int(v).map(ParamValue::Int)
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.family().keys().iter().zip(self.values()).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match v {
                ParamValue::Int(x) => write!(f, "{k}={x}")?,
                ParamValue::List(xs) => {
                    let parts: Vec<String> = xs.iter().map(u32::to_string).collect();
                    write!(f, "{k}={}", parts.join(":"))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn family_names_round_trip() {
        for f in FamilyId::ALL {
            assert_eq!(f.name().parse::<FamilyId>().unwrap(), f);
        }
        assert_eq!("m2_a5".parse::<FamilyId>().unwrap(), FamilyId::A5);
        assert!("P37".parse::<FamilyId>().is_err());
    }

    #[test]
    fn parse_and_display() {
        let p = FamilyParams::parse(FamilyId::T31, "a=2,b=2,c=2,e=12,v=0:1").unwrap();
        assert_eq!(
            p,
            FamilyParams::T31(Torus {
                a: 2,
                b: 2,
                c: 2,
                e: 12,
                v: vec![0, 1]
            })
        );
        assert_eq!(p.to_string(), "a=2,b=2,c=2,e=12,v=0:1");
        let p = FamilyParams::parse(FamilyId::P34, "e=28, a=2, m=3").unwrap();
        assert_eq!(p.to_string(), "a=2,e=28,m=3");
        let p = FamilyParams::parse(FamilyId::A5, "ω=5").unwrap();
        assert_eq!(p, FamilyParams::A5 { omega: 5 });
    }

    #[test]
    fn parse_rejects_malformed() {
        for (f, s) in [
            (FamilyId::P34, "a=2,e=28"),
            (FamilyId::P34, "a=2,e=28,m=3,z=1"),
            (FamilyId::P34, "a=2,e=28,m=x"),
            (FamilyId::P34, "a=2,a=2,e=28,m=3"),
            (FamilyId::P34, "a=0,e=28,m=3"),
            (FamilyId::P34, "a2,e=28,m=3"),
            (FamilyId::T31, "a=1,b=1,c=1,e=1"),
            (FamilyId::T31, "a=1,b=1,c=1,e=1,v=0:"),
            (FamilyId::P32, "a=1,c=1,e=1,v=0"),
        ] {
            assert!(FamilyParams::parse(f, s).is_err(), "{f} {s}");
        }
    }

    #[test]
    fn json_round_trip() {
        let p = FamilyParams::parse(FamilyId::CycQp, "a=1,b=3,c=1,e=9,v=1").unwrap();
        let j = p.to_json();
        assert_eq!(j, json!({"a": 1, "b": 3, "c": 1, "e": 9, "v": [1]}));
        assert_eq!(FamilyParams::from_json(FamilyId::CycQp, &j).unwrap(), p);
        assert!(FamilyParams::from_json(FamilyId::CycQp, &json!([1])).is_err());
        assert!(FamilyParams::from_json(FamilyId::P36, &json!({"a": -1, "e": 1})).is_err());
    }

    fn arb_params() -> impl Strategy<Value = FamilyParams> {
        let n = 1u64..500;
        prop_oneof![
            (
                n.clone(),
                n.clone(),
                n.clone(),
                n.clone(),
                prop::collection::vec(0u32..5, 1..4)
            )
                .prop_map(|(a, b, c, e, v)| FamilyParams::T31(Torus { a, b, c, e, v })),
            (n.clone(), n.clone(), n.clone(), n.clone())
                .prop_map(|(a, c, e, l)| FamilyParams::P33 { a, c, e, l }),
            (n.clone(), n.clone(), n.clone()).prop_map(|(f, d, omega)| FamilyParams::Eabsd {
                f,
                d,
                omega
            }),
            n.prop_map(|omega| FamilyParams::Omega { omega }),
        ]
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(p in arb_params()) {
            let back = FamilyParams::parse(p.family(), &p.to_string()).unwrap();
            prop_assert_eq!(&back, &p);
            let back = FamilyParams::from_json(p.family(), &p.to_json()).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
