//! Tjurina numbers of the normal forms carrying an Artin coindex.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::{tjurina_number, Family};
use crate::error::{Error, Result};
use crate::exactalg::{parse, vars, FieldSpec, Polynomial};

const ARTIN_FORMS: &str = include_str!("../../data/artin_forms.txt");

/// One normal form from the data file.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub p: u32,
    pub family: Family,
    pub n: u32,
    pub r: u32,
    pub equation: Polynomial,
}

/// Parse the embedded normal-form records.
pub fn normal_forms() -> Result<Vec<NormalForm>> {
    let v = vars(&["x", "y", "z"]);
    let mut out = Vec::new();
    for (lineno, line) in ARTIN_FORMS.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::ArtinTable(format!("line {}: `{line}`", lineno + 1));
        let (head, eq) = line.split_once(':').ok_or_else(bad)?;
        let fields: Vec<&str> = head.split_whitespace().collect();
        let [p, family, n, r] = fields.as_slice() else {
            return Err(bad());
        };
        let p: u32 = p.parse().map_err(|_| bad())?;
        let family = match *family {
            "A" => Family::A,
            "D" => Family::D,
            "E" => Family::E,
            _ => return Err(bad()),
        };
        let field = FieldSpec::new(p, 1)?;
        out.push(NormalForm {
            p,
            family,
            n: n.parse().map_err(|_| bad())?,
            r: r.parse().map_err(|_| bad())?,
            equation: parse(eq.trim(), &v, &field)?,
        });
    }
    Ok(out)
}

/// `(family, n, r) -> tau` for one characteristic.
pub type TauTable = BTreeMap<(Family, u32, u32), usize>;

fn build(p: u32) -> Result<TauTable> {
    let mut table = TauTable::new();
    for nf in normal_forms()?.into_iter().filter(|nf| nf.p == p) {
        let tau = tjurina_number(&nf.equation)?;
        table.insert((nf.family, nf.n, nf.r), tau);
    }
    for ((family, n, r), tau) in &table {
        if let Some(((_, _, r2), _)) = table
            .iter()
            .find(|((f2, n2, r2), t2)| f2 == family && n2 == n && r2 != r && *t2 == tau)
        {
            return Err(Error::ArtinTable(format!(
                "{family:?}_{n}: coindices {r} and {r2} share tau = {tau}"
            )));
        }
    }
    Ok(table)
}

/// The Tjurina table of Artin's normal forms in characteristic `p`,
/// computed once per process. Characteristics without coindices give an
/// empty table.
pub fn artin_tau_table(p: u32) -> Result<&'static TauTable> {
    static TABLES: OnceLock<BTreeMap<u32, Result<TauTable>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| [2, 3, 5, 7].into_iter().map(|p| (p, build(p))).collect());
    match tables.get(&p) {
        Some(Ok(t)) => Ok(t),
        Some(Err(e)) => Err(e.clone()),
        None => Err(Error::UnsupportedPrime(p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_separate_coindices() {
        let t2 = artin_tau_table(2).unwrap();
        let e8: Vec<usize> = (0..=4).map(|r| t2[&(Family::E, 8, r)]).collect();
        let mut dedup = e8.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), 5, "{e8:?}");
        let t3 = artin_tau_table(3).unwrap();
        assert_ne!(t3[&(Family::E, 6, 0)], t3[&(Family::E, 6, 1)]);
        assert!(t3.keys().all(|(f, _, _)| *f == Family::E));
        assert!(artin_tau_table(5).unwrap().is_empty());
    }
}
