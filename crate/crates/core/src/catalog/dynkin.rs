use std::fmt;
use std::str::FromStr;

use crate::duval::{AdeType, Family};
use crate::error::{Error, Result};

/// A formal sum of ADE types, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinType {
    components: Vec<AdeType>,
}

impl DynkinType {
    pub fn new(mut components: Vec<AdeType>) -> DynkinType {
        components.sort();
        DynkinType { components }
    }

    pub fn components(&self) -> &[AdeType] {
        &self.components
    }

    pub fn rank(&self) -> u32 {
        self.components.iter().map(AdeType::rank).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn has_coindices(&self) -> bool {
        self.components.iter().any(|c| c.coindex.is_some())
    }

    pub fn without_coindices(&self) -> DynkinType {
        DynkinType::new(self.components.iter().map(AdeType::without_coindex).collect())
    }

    /// Equality as an expectation: coindices are compared only when `self`
    /// carries them.
    pub fn matches(&self, computed: &DynkinType) -> bool {
        if self.has_coindices() {
            self == computed
        } else {
            *self == computed.without_coindices()
        }
    }
}

fn parse_component(s: &str) -> Result<(u32, AdeType)> {
    let bad = || Error::DynkinParse(format!("`{s}`"));
    let split = s.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
    let mult: u32 = if split == 0 {
        1
    } else {
        s[..split].parse().map_err(|_| bad())?
    };
    let rest = &s[split..];
    let family = match rest.chars().next() {
        Some('A') => Family::A,
        Some('D') => Family::D,
        Some('E') => Family::E,
        _ => return Err(bad()),
    };
    let rest = rest[1..].strip_prefix('_').unwrap_or(&rest[1..]);
    let (n, r) = match rest.split_once('^') {
        Some((n, r)) => (n, Some(r.parse::<u32>().map_err(|_| bad())?)),
        None => (rest, None),
    };
    let n: u32 = n.parse().map_err(|_| bad())?;
    if mult == 0 {
        return Err(bad());
    }
    Ok((mult, AdeType::new(family, n, r)?))
}

impl FromStr for DynkinType {
    type Err = Error;

    /// Grammar: `[mult] family ['_'] n ['^' r]`, joined by `+`.
    fn from_str(s: &str) -> Result<DynkinType> {
        let mut comps = Vec::new();
        for part in s.split('+') {
            let part: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            let (m, t) = parse_component(&part)?;
            comps.extend(std::iter::repeat_n(t, m as usize));
        }
        Ok(DynkinType::new(comps))
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("smooth");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.components.len() {
            let c = self.components[i];
            let run = self.components[i..].iter().take_while(|&&d| d == c).count();
            if !first {
                f.write_str("+")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{run}")?;
            }
            write!(f, "{c}")?;
            i += run;
        }
        Ok(())
    }
}
