use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModsolveError;

/// A finite set D of positive odd integers, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct ExponentSet {
    members: Vec<u32>,
}

impl ExponentSet {
    pub fn new(members: impl IntoIterator<Item = u32>) -> Result<Self, ModsolveError> {
        let mut members: Vec<u32> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&d| d % 2 == 0) {
            return Err(ModsolveError::BadMember(bad));
        }
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(ModsolveError::EmptySet);
        }
        Ok(ExponentSet { members })
    }

    /// All odd integers in 1..=max.
    pub fn odds_up_to(max: u32) -> Result<Self, ModsolveError> {
        ExponentSet::new((1..=max).step_by(2))
    }

    /// The set without the given members. Absent members are ignored.
    pub fn exclude(&self, removed: &[u32]) -> Result<Self, ModsolveError> {
        ExponentSet::new(self.members.iter().copied().filter(|d| !removed.contains(d)))
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn max(&self) -> u32 {
        *self.members.last().expect("nonempty by construction")
    }

    pub fn contains(&self, d: u32) -> bool {
        self.members.binary_search(&d).is_ok()
    }
}

impl TryFrom<Vec<u32>> for ExponentSet {
    type Error = ModsolveError;

    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        ExponentSet::new(v)
    }
}

impl From<ExponentSet> for Vec<u32> {
    fn from(s: ExponentSet) -> Self {
        s.members
    }
}

/// Comma-separated items, each a member or a range `odd<=N`.
impl FromStr for ExponentSet {
    type Err = ModsolveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModsolveError::BadSetSpec(s.to_string());
        let mut members = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let compact: String = item.chars().filter(|c| !c.is_whitespace()).collect();
            if let Some(max) = compact.strip_prefix("odd<=") {
                let max: u32 = max.parse().map_err(|_| bad())?;
                members.extend((1..=max).step_by(2));
            } else {
                members.push(compact.parse().map_err(|_| bad())?);
            }
        }
        ExponentSet::new(members)
    }
}

impl fmt::Display for ExponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.members.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let d: ExponentSet = "odd<=13".parse().unwrap();
        assert_eq!(d.members(), [1, 3, 5, 7, 9, 11, 13]);
        let d: ExponentSet = "7, 3,3".parse().unwrap();
        assert_eq!(d.members(), [3, 7]);
        let d: ExponentSet = "odd <= 5, 11".parse().unwrap();
        assert_eq!(d.members(), [1, 3, 5, 11]);
        assert_eq!("4".parse::<ExponentSet>(), Err(ModsolveError::BadMember(4)));
        assert_eq!("".parse::<ExponentSet>(), Err(ModsolveError::EmptySet));
        assert!("x".parse::<ExponentSet>().is_err());
    }

    #[test]
    fn exclusion() {
        let d = ExponentSet::odds_up_to(29).unwrap().exclude(&[15, 2]).unwrap();
        assert!(!d.contains(15));
        assert_eq!(d.len(), 14);
        assert_eq!(d.max(), 29);
        assert_eq!(ExponentSet::new([1]).unwrap().exclude(&[1]), Err(ModsolveError::EmptySet));
    }

    #[test]
    fn json_is_a_list() {
        let d = ExponentSet::new([3, 1]).unwrap();
        assert_eq!(serde_json::to_string(&d).unwrap(), "[1,3]");
        assert!(serde_json::from_str::<ExponentSet>("[2]").is_err());
        assert_eq!(d.to_string(), "{1,3}");
    }
}
