use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

/// A Java platform version. `"1.N"` and `"N"` normalize to the same major.
#[derive(Debug, Clone, Serialize)]
pub struct JavaVersion {
    pub major: u32,
    pub source_text: String,
}

pub const MIN_MAJOR: u32 = 5;
pub const MAX_MAJOR: u32 = 13;

impl JavaVersion {
    pub fn parse(text: &str) -> Option<JavaVersion> {
        let t = text.trim();
        let digits = t.strip_prefix("1.").unwrap_or(t);
        let major: u32 = digits.parse().ok()?;
        (MIN_MAJOR..=MAX_MAJOR)
            .contains(&major)
            .then(|| JavaVersion {
                major,
                source_text: t.to_string(),
            })
    }

    /// The `TrigIt.JAVA<N>` constants.
    pub fn constant(major: u32) -> JavaVersion {
        JavaVersion {
            major,
            source_text: display_major(major),
        }
    }

    pub fn greater_equal_than(&self, other: &JavaVersion) -> bool {
        self.cmp(other) != Ordering::Less
    }
}

/// Conventional spelling: `1.6` up to Java 8, bare majors afterwards.
pub fn display_major(major: u32) -> String {
    if major <= 8 {
        format!("1.{major}")
    } else {
        major.to_string()
    }
}

impl PartialEq for JavaVersion {
    fn eq(&self, other: &Self) -> bool {
        self.major == other.major
    }
}

impl Eq for JavaVersion {}

impl PartialOrd for JavaVersion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for JavaVersion {
    fn cmp(&self, other: &Self) -> Ordering {
        self.major.cmp(&other.major)
    }
}

impl fmt::Display for JavaVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source_text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> JavaVersion {
        JavaVersion::parse(s).unwrap()
    }

    #[test]
    fn comparisons() {
        assert_eq!(v("1.6").cmp(&v("1.6")), Ordering::Equal);
        assert_eq!(v("1.7").cmp(&JavaVersion::constant(6)), Ordering::Greater);
        assert!(v("1.7").greater_equal_than(&JavaVersion::constant(6)));
        assert_eq!(v("9").cmp(&v("1.8")), Ordering::Greater);
        assert!(!v("1.5").greater_equal_than(&JavaVersion::constant(6)));
    }

    #[test]
    fn normalization() {
        for n in MIN_MAJOR..=MAX_MAJOR {
            assert_eq!(v(&format!("1.{n}")), v(&n.to_string()));
            assert_eq!(v(&format!("1.{n}")).major, n);
        }
        for bad in ["", "1.4", "14", "1.x", "java8", "1."] {
            assert!(JavaVersion::parse(bad).is_none(), "{bad}");
        }
    }

    #[test]
    fn constants_display() {
        assert_eq!(JavaVersion::constant(6).to_string(), "1.6");
        assert_eq!(JavaVersion::constant(9).to_string(), "9");
    }
}
