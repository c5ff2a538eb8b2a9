//! Java version extraction from `pom.xml` and `trigit.properties`.

use serde::Serialize;

use super::version::JavaVersion;
use crate::error::ConfigError;

/// Keys consulted for the Java version, highest priority first.
pub const VERSION_KEYS: &[&str] = &["maven.compiler.source", "source", "java.version"];

pub const POM_FILE: &str = "pom.xml";
pub const PROPERTIES_FILE: &str = "trigit.properties";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Location {
    pub file: String,
    pub line: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildConfigModel {
    pub path: String,
    pub java_version: JavaVersion,
    pub version_location: Location,
}

pub fn is_build_config(file_name: &str) -> bool {
    file_name == POM_FILE || file_name == PROPERTIES_FILE
}

/// Parses a build configuration; `path` is used for reporting and to pick the
/// format from the file name.
pub fn parse_build_config(path: &str, text: &str) -> Result<BuildConfigModel, ConfigError> {
    let name = path.rsplit('/').next().unwrap_or(path);
    let entries = if name == POM_FILE {
        scan_xml_elements(text).map_err(|reason| ConfigError {
            path: path.to_string(),
            reason,
        })?
    } else if name == PROPERTIES_FILE {
        scan_properties(text)
    } else {
        return Err(ConfigError {
            path: path.to_string(),
            reason: "not a recognized build configuration file".into(),
        });
    };
    let Some((value, line)) = VERSION_KEYS
        .iter()
        .find_map(|key| entries.iter().find(|e| e.0 == *key))
        .map(|(_, v, l)| resolve(&entries, v, *l))
    else {
        return Err(ConfigError {
            path: path.to_string(),
            reason: format!("no Java version key (looked for {})", VERSION_KEYS.join(", ")),
        });
    };
    let java_version = JavaVersion::parse(&value).ok_or_else(|| ConfigError {
        path: path.to_string(),
        reason: format!("unrecognized Java version `{value}`"),
    })?;
    Ok(BuildConfigModel {
        path: path.to_string(),
        java_version,
        version_location: Location {
            file: path.to_string(),
            line,
        },
    })
}

/// Follows one level of `${name}` indirection to another entry.
fn resolve(entries: &[(String, String, u32)], value: &str, line: u32) -> (String, u32) {
    if let Some(name) = value.strip_prefix("${").and_then(|v| v.strip_suffix('}')) {
        if let Some((_, v, l)) = entries.iter().find(|e| e.0 == name) {
            return (v.clone(), *l);
        }
    }
    (value.to_string(), line)
}

/// `key=value` lines; `#` and `!` start comments.
fn scan_properties(text: &str) -> Vec<(String, String, u32)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let l = line.trim_start();
            if l.is_empty() || l.starts_with('#') || l.starts_with('!') {
                return None;
            }
            let (k, v) = l.split_once('=')?;
            Some((k.trim().to_string(), v.trim().to_string(), i as u32 + 1))
        })
        .collect()
}

/// Collects `(element name, text content, line)` for every element whose
/// content is plain text. Comments, processing instructions and declarations
/// are skipped; namespaces are not interpreted.
fn scan_xml_elements(text: &str) -> Result<Vec<(String, String, u32)>, String> {
    let mut out = Vec::new();
    let mut pos = 0usize;
    let line_at = |at: usize| text[..at].matches('\n').count() as u32 + 1;
    while let Some(rel) = text[pos..].find('<') {
        let start = pos + rel;
        let rest = &text[start..];
        let skip_to = |pat: &str| {
            rest.find(pat)
                .map(|i| start + i + pat.len())
                .ok_or_else(|| format!("unterminated markup at line {}", line_at(start)))
        };
        if rest.starts_with("<!--") {
            pos = skip_to("-->")?;
            continue;
        }
        if rest.starts_with("<![CDATA[") {
            pos = skip_to("]]>")?;
            continue;
        }
        if rest.starts_with("<?") {
            pos = skip_to("?>")?;
            continue;
        }
        if rest.starts_with("<!") || rest.starts_with("</") {
            pos = skip_to(">")?;
            continue;
        }
        let tag_end = skip_to(">")?;
        let tag = &text[start + 1..tag_end - 1];
        pos = tag_end;
        if tag.ends_with('/') {
            continue;
        }
        let name = tag.split_whitespace().next().unwrap_or("").to_string();
        let content_end = text[pos..].find('<').map_or(text.len(), |i| pos + i);
        let closing = format!("</{name}");
        if text[content_end..].starts_with(&closing) {
            let raw = &text[pos..content_end];
            let lead = raw.len() - raw.trim_start().len();
            out.push((name, decode_entities(raw.trim()), line_at(pos + lead)));
        }
    }
    Ok(out)
}

fn decode_entities(s: &str) -> String {
    s.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&")
}
