//! Genus spectra: every genus reached by a family tuple at a given `q`.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::Result;
use crate::families::{enumerate, genus, FamilyId, FamilyParams};
use crate::numthy::PrimePower;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub params: FamilyParams,
    pub group_order: u64,
}

impl Witness {
    pub fn family(&self) -> FamilyId {
        self.params.family()
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Witness", 3)?;
        st.serialize_field("family", self.family().name())?;
        st.serialize_field("params", &self.params.to_json())?;
        st.serialize_field("group_order", &self.group_order)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SpectrumEntry {
    pub genus: u64,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Spectrum {
    pub q: u64,
    pub entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn genera(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|e| e.genus)
    }

    pub fn get(&self, g: u64) -> Option<&SpectrumEntry> {
        self.entries
            .binary_search_by_key(&g, |e| e.genus)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn contains(&self, g: u64) -> bool {
        self.get(g).is_some()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }

    /// One row per witness: genus, family, params, group order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["genus", "family", "params", "group_order"])?;
        for e in &self.entries {
            for wit in &e.witnesses {
                w.write_record([
                    e.genus.to_string(),
                    wit.family().name().to_string(),
                    wit.params.to_string(),
                    wit.group_order.to_string(),
                ])?;
            }
        }
        Ok(w.flush()?)
    }
}

/// Union over the requested families of every tuple's genus, ascending.
/// Families that do not apply to `q` contribute nothing.
pub fn compute_spectrum(q: &PrimePower, families: &[FamilyId]) -> Result<Spectrum> {
    let records: Vec<Vec<(u64, Witness)>> = families
        .par_iter()
        .map(|&f| {
            enumerate(q, f)?
                .into_par_iter()
                .map(|params| {
                    let r = genus(q, &params)?;
                    Ok((
                        r.genus,
                        Witness {
                            params,
                            group_order: r.group_order,
                        },
                    ))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut by_genus: BTreeMap<u64, Vec<Witness>> = BTreeMap::new();
    for (g, w) in records.into_iter().flatten() {
        by_genus.entry(g).or_default().push(w);
    }
    Ok(Spectrum {
        q: q.q(),
        entries: by_genus
            .into_iter()
            .map(|(genus, witnesses)| SpectrumEntry { genus, witnesses })
            .collect(),
    })
}

/// The rows of the table of new genera: `(q, genera)`.
pub const TABLE1: [(u64, &[u64]); 6] = [
    (13, &[1]),
    (32, &[20, 55]),
    (128, &[22, 133, 287, 420, 903, 904]),
    (243, &[10, 161, 280, 590, 1180, 2420]),
    (2187, &[91, 1457, 24661, 49595, 99190, 198926]),
    (
        125,
        &[
            17, 39, 46, 63, 91, 134, 210, 211, 273, 274, 369, 630, 631, 861,
        ],
    ),
];

#[derive(Clone, Debug, serde::Serialize)]
pub struct Table1Value {
    pub genus: u64,
    pub present: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Table1Row {
    pub q: u64,
    pub values: Vec<Table1Value>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Table1Report {
    pub rows: Vec<Table1Row>,
}

impl Table1Report {
    pub fn all_present(&self) -> bool {
        self.rows.iter().all(|r| r.values.iter().all(|v| v.present))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["q", "present", "absent", "genera"])?;
        for r in &self.rows {
            let present = r.values.iter().filter(|v| v.present).count();
            let genera: Vec<String> = r
                .values
                .iter()
                .map(|v| {
                    format!(
                        "{}:{}",
                        v.genus,
                        if v.present { "PRESENT" } else { "ABSENT" }
                    )
                })
                .collect();
            w.write_record([
                r.q.to_string(),
                present.to_string(),
                (r.values.len() - present).to_string(),
                genera.join(" "),
            ])?;
        }
        Ok(w.flush()?)
    }
}

/// Membership of every listed genus in the spectrum of the given families.
pub fn check_table1(families: &[FamilyId]) -> Result<Table1Report> {
    let rows = TABLE1
        .iter()
        .map(|&(q, genera)| {
            let spectrum = compute_spectrum(&PrimePower::new(q)?, families)?;
            let values = genera
                .iter()
                .map(|&g| {
                    let witness = spectrum.get(g).map(|e| e.witnesses[0].clone());
                    Table1Value {
                        genus: g,
                        present: witness.is_some(),
                        witness,
                    }
                })
                .collect();
            Ok(Table1Row { q, values })
        })
        .collect::<Result<_>>()?;
    Ok(Table1Report { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(q: u64) -> Spectrum {
        compute_spectrum(&PrimePower::new(q).unwrap(), &FamilyId::ALL).unwrap()
    }

    #[test]
    fn endpoints() {
        let s = spectrum(4);
        assert!(s.contains(0));
        assert!(s.contains(6));
        assert_eq!(s.genera().max(), Some(6));
        assert!(s.entries.windows(2).all(|w| w[0].genus < w[1].genus));
    }

    #[test]
    fn small_rows() {
        let s = spectrum(13);
        let one = s.get(1).unwrap();
        assert!(one.witnesses.iter().any(|w| w.family() == FamilyId::P34));
        assert!(one.witnesses.iter().any(|w| w.family() == FamilyId::P36));
        let s = spectrum(32);
        assert!(s.contains(20) && s.contains(55));
        assert!(s.entries.iter().all(|e| e.genus <= 32 * 31 / 2));
    }

    #[test]
    fn subset_is_contained() {
        let q = PrimePower::new(27).unwrap();
        let all = compute_spectrum(&q, &FamilyId::ALL).unwrap();
        let some = compute_spectrum(&q, &[FamilyId::P34, FamilyId::P36]).unwrap();
        assert!(some.genera().all(|g| all.contains(g)));
    }

    #[test]
    fn output_is_deterministic() {
        let a = spectrum(16);
        let b = spectrum(16);
        assert_eq!(a.to_json(), b.to_json());
        let mut csv = Vec::new();
        a.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("genus,family,params,group_order\n0,"));
    }
}
