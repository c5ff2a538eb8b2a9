//! Immutable project-wide model of classes, members and build configuration.

pub mod build_config;
pub mod version;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LoadError, SourceError, SyntaxError};
use crate::syntax::ast::{
    Annotation, ClassDecl, Member, Modifier, ModifierList, TokRange,
};
use crate::syntax::ParsedFile;
pub use build_config::{BuildConfigModel, Location};
pub use version::JavaVersion;

pub const TRIGIT_ANNOTATION: &str = "TrigItMethod";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    Protected,
    Private,
    Package,
}

impl Visibility {
    pub fn keyword(self) -> Option<&'static str> {
        match self {
            Visibility::Public => Some("public"),
            Visibility::Protected => Some("protected"),
            Visibility::Private => Some("private"),
            Visibility::Package => None,
        }
    }

    pub fn name(self) -> &'static str {
        self.keyword().unwrap_or("package-private")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Modifiers {
    pub visibility: Visibility,
    pub is_static: bool,
    pub is_final: bool,
    pub is_abstract: bool,
    /// Modifier keywords with their token indices.
    pub items: Vec<(Modifier, usize)>,
    /// Empty when there are no modifiers; then `lo` is the insertion point.
    pub toks: TokRange,
}

impl Modifiers {
    fn from_list(list: &ModifierList) -> Modifiers {
        let visibility = list
            .items
            .iter()
            .find_map(|(m, _)| match m {
                Modifier::Public => Some(Visibility::Public),
                Modifier::Protected => Some(Visibility::Protected),
                Modifier::Private => Some(Visibility::Private),
                _ => None,
            })
            .unwrap_or(Visibility::Package);
        Modifiers {
            visibility,
            is_static: list.has(Modifier::Static),
            is_final: list.has(Modifier::Final),
            is_abstract: list.has(Modifier::Abstract),
            items: list.items.clone(),
            toks: list.toks,
        }
    }
}

/// Where a declaration lives in its file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeclSite {
    pub file_index: usize,
    pub file: String,
    pub toks: TokRange,
    pub line: u32,
    pub end_line: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodModel {
    pub name: String,
    pub modifiers: Modifiers,
    /// Return type as written; empty for constructors.
    pub type_text: String,
    pub annotations: Vec<String>,
    pub param_count: usize,
    pub is_trigit_method: bool,
    pub is_constructor: bool,
    pub decl: DeclSite,
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldModel {
    pub name: String,
    pub modifiers: Modifiers,
    pub type_text: String,
    pub annotations: Vec<String>,
    pub decl: DeclSite,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassModel {
    pub name: String,
    pub qualified_name: String,
    pub modifiers: Modifiers,
    pub fields: Vec<FieldModel>,
    pub methods: Vec<MethodModel>,
    /// Index of the enclosing class for nested classes.
    pub enclosing: Option<usize>,
    pub decl: DeclSite,
}

impl ClassModel {
    pub fn method(&self, name: &str) -> Option<&MethodModel> {
        self.methods.iter().find(|m| m.name == name)
    }

    pub fn field(&self, name: &str) -> Option<&FieldModel> {
        self.fields.iter().find(|f| f.name == name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JavaFileModel {
    pub path: String,
    /// Indices into [`ProjectModel::classes`].
    pub classes: Vec<usize>,
}

impl JavaFileModel {
    pub fn file_name(&self) -> &str {
        self.path.rsplit('/').next().unwrap_or(&self.path)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ProjectModel {
    pub java_files: Vec<JavaFileModel>,
    pub classes: Vec<ClassModel>,
    pub build_configs: Vec<BuildConfigModel>,
    pub warnings: Vec<String>,
}

/// What [`ProjectModel::lookup`] should find.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector<'a> {
    Class(&'a str),
    Method { class: &'a str, name: &'a str },
    Field { class: &'a str, name: &'a str },
}

#[derive(Debug, Clone, Copy)]
pub enum Element<'a> {
    Class(&'a ClassModel),
    Method(&'a ClassModel, &'a MethodModel),
    Field(&'a ClassModel, &'a FieldModel),
}

#[derive(Debug, Clone)]
pub struct Lookup<'a> {
    pub element: Option<Element<'a>>,
    /// Set when the selector matched more than one candidate.
    pub ambiguity: Option<String>,
}

impl ProjectModel {
    /// Resolves a class by qualified name, or by simple name (last segment).
    /// Ambiguous simple names resolve to the first match in path order.
    pub fn find_class(&self, name: &str) -> (Option<usize>, Option<String>) {
        if let Some(i) = self.classes.iter().position(|c| c.qualified_name == name) {
            return (Some(i), None);
        }
        let matches: Vec<usize> = self
            .classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.name == name)
            .map(|(i, _)| i)
            .collect();
        let warning = (matches.len() > 1).then(|| {
            let names: Vec<_> = matches
                .iter()
                .map(|&i| self.classes[i].qualified_name.as_str())
                .collect();
            format!(
                "class name `{name}` is ambiguous ({}); using {}",
                names.join(", "),
                names[0]
            )
        });
        (matches.first().copied(), warning)
    }

    pub fn has_class(&self, name: &str) -> bool {
        self.find_class(name).0.is_some()
    }

    pub fn lookup(&self, selector: &Selector) -> Lookup<'_> {
        let class_name = match selector {
            Selector::Class(c) | Selector::Method { class: c, .. } | Selector::Field { class: c, .. } => *c,
        };
        let (idx, mut ambiguity) = self.find_class(class_name);
        let Some(class) = idx.map(|i| &self.classes[i]) else {
            return Lookup {
                element: None,
                ambiguity,
            };
        };
        let element = match selector {
            Selector::Class(_) => Some(Element::Class(class)),
            Selector::Method { name, .. } => {
                let overloads = class.methods.iter().filter(|m| m.name == *name).count();
                if overloads > 1 && ambiguity.is_none() {
                    ambiguity = Some(format!(
                        "method `{name}` is overloaded in {}; using the first declaration",
                        class.qualified_name
                    ));
                }
                class.method(name).map(|m| Element::Method(class, m))
            }
            Selector::Field { name, .. } => class.field(name).map(|f| Element::Field(class, f)),
        };
        Lookup { element, ambiguity }
    }

    /// Version from the primary build configuration (shallowest path first).
    pub fn primary_build_config(&self) -> Option<&BuildConfigModel> {
        self.build_configs
            .iter()
            .min_by_key(|c| (c.path.matches('/').count(), c.path.clone()))
    }

    /// Builds the model from already parsed files and build configs.
    pub fn from_parts(files: &[ParsedFile], build_configs: Vec<BuildConfigModel>) -> ProjectModel {
        let mut model = ProjectModel {
            build_configs,
            ..ProjectModel::default()
        };
        for (file_index, file) in files.iter().enumerate() {
            let prefix = file.unit.package.clone().unwrap_or_default();
            let mut ids = Vec::new();
            for class in &file.unit.classes {
                add_class(&mut model, file, file_index, class, &prefix, None, &mut ids);
            }
            model.java_files.push(JavaFileModel {
                path: file.path.clone(),
                classes: ids,
            });
        }
        model
    }
}

fn annotation_names(a: &[Annotation]) -> Vec<String> {
    a.iter().map(|a| a.simple_name().to_string()).collect()
}

fn site(file: &ParsedFile, file_index: usize, toks: TokRange) -> DeclSite {
    let span = toks.span(&file.tokens);
    DeclSite {
        file_index,
        file: file.path.clone(),
        toks,
        line: span.start_line,
        end_line: span.end_line,
    }
}

fn add_class(
    model: &mut ProjectModel,
    file: &ParsedFile,
    file_index: usize,
    class: &ClassDecl,
    prefix: &str,
    enclosing: Option<usize>,
    ids: &mut Vec<usize>,
) {
    let qualified_name = if prefix.is_empty() {
        class.name.name.clone()
    } else {
        format!("{prefix}.{}", class.name.name)
    };
    if model.classes.iter().any(|c| c.qualified_name == qualified_name) {
        model.warnings.push(format!(
            "duplicate class {qualified_name} in {}; keeping the first declaration",
            file.path
        ));
        return;
    }
    let mut fields = Vec::new();
    let mut methods = Vec::new();
    for m in &class.members {
        match m {
            Member::Field(f) => fields.push(FieldModel {
                name: f.name.name.clone(),
                modifiers: Modifiers::from_list(&f.modifiers),
                type_text: f.ty.text.clone(),
                annotations: annotation_names(&f.annotations),
                decl: site(file, file_index, f.toks),
            }),
            Member::Method(m) => {
                let annotations = annotation_names(&m.annotations);
                methods.push(MethodModel {
                    name: m.name.name.clone(),
                    modifiers: Modifiers::from_list(&m.modifiers),
                    type_text: m.ret.text().to_string(),
                    is_trigit_method: annotations.iter().any(|a| a == TRIGIT_ANNOTATION),
                    annotations,
                    param_count: m.params.len(),
                    is_constructor: m.is_constructor(),
                    decl: site(file, file_index, m.toks),
                })
            }
            Member::StaticBlock(_) | Member::Class(_) => {}
        }
    }
    let id = model.classes.len();
    model.classes.push(ClassModel {
        name: class.name.name.clone(),
        qualified_name: qualified_name.clone(),
        modifiers: Modifiers::from_list(&class.modifiers),
        fields,
        methods,
        enclosing,
        decl: site(file, file_index, class.toks),
    });
    ids.push(id);
    for m in &class.members {
        if let Member::Class(inner) = m {
            add_class(model, file, file_index, inner, &qualified_name, Some(id), ids);
        }
    }
}

/// Parsed sources plus the model built from them.
#[derive(Debug, Clone)]
pub struct Project {
    pub root: PathBuf,
    pub files: Vec<ParsedFile>,
    pub model: ProjectModel,
    /// Problems skipped over in lenient mode.
    pub errors: Vec<SourceError>,
    /// Build configurations and unparsed sources, `(path, text)`.
    pub raw_files: Vec<(String, String)>,
}

impl Project {
    pub fn file(&self, path: &str) -> Option<&ParsedFile> {
        self.files.iter().find(|f| f.path == path)
    }

    /// Assembles a project from in-memory `(relative path, text)` pairs.
    pub fn from_sources(
        sources: Vec<(String, String)>,
        lenient: bool,
    ) -> Result<Project, LoadError> {
        let mut sources = sources;
        sources.sort_by(|a, b| a.0.cmp(&b.0));
        let (configs, java): (Vec<_>, Vec<_>) = sources.into_iter().partition(|(p, _)| {
            build_config::is_build_config(p.rsplit('/').next().unwrap_or(p))
        });
        let parsed: Vec<Result<ParsedFile, (SyntaxError, String, String)>> = java
            .into_par_iter()
            .map(|(path, text)| {
                ParsedFile::parse(text.clone(), &path).map_err(|e| (e, path, text))
            })
            .collect();
        let mut errors = Vec::new();
        let mut files = Vec::new();
        let mut raw_files = Vec::new();
        for p in parsed {
            match p {
                Ok(f) => files.push(f),
                Err((e, path, text)) => {
                    errors.push(SourceError::Syntax(e));
                    raw_files.push((path, text));
                }
            }
        }
        let mut build_configs = Vec::new();
        for (path, text) in configs {
            match build_config::parse_build_config(&path, &text) {
                Ok(c) => build_configs.push(c),
                Err(e) => errors.push(SourceError::Config(e)),
            }
            raw_files.push((path, text));
        }
        raw_files.sort_by(|a, b| a.0.cmp(&b.0));
        if !errors.is_empty() && !lenient {
            return Err(LoadError::Invalid(errors));
        }
        let model = ProjectModel::from_parts(&files, build_configs);
        Ok(Project {
            root: PathBuf::new(),
            files,
            model,
            errors,
            raw_files,
        })
    }
}

/// Reads every `.java` file and build configuration under `root` and builds
/// the project model. In strict mode any syntax or configuration error
/// aborts with the complete error list.
pub fn build_project_model(root: &Path, lenient: bool) -> Result<Project, LoadError> {
    let sources = read_tree(root)?;
    let mut project = Project::from_sources(sources, lenient)?;
    project.root = root.to_path_buf();
    Ok(project)
}

/// `(relative path, contents)` for every source and build file under `root`,
/// sorted by path. Hidden directories are skipped.
pub fn read_tree(root: &Path) -> Result<Vec<(String, String)>, LoadError> {
    let io = |path: &Path, source: std::io::Error| LoadError::Io {
        path: path.to_path_buf(),
        source,
    };
    if !root.is_dir() {
        return Err(io(
            root,
            std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
        ));
    }
    let mut out = Vec::new();
    let walker = walkdir::WalkDir::new(root)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !e.file_name().to_string_lossy().starts_with('.'));
    for entry in walker {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            io(&path, e.into())
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let name = entry.file_name().to_string_lossy();
        if !(name.ends_with(".java") || build_config::is_build_config(&name)) {
            continue;
        }
        let rel = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        let text = std::fs::read_to_string(entry.path()).map_err(|e| io(entry.path(), e))?;
        out.push((rel, text));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn project(files: &[(&str, &str)]) -> Project {
        Project::from_sources(
            files
                .iter()
                .map(|(p, s)| (p.to_string(), s.to_string()))
                .collect(),
            false,
        )
        .unwrap()
    }

    const MAPPER: &str = "public class Mapper {\n    private final String simpleName;\n\n    public final String simpleName() {\n        return simpleName;\n    }\n\n    @TrigItMethod\n    public static void checkMerge() {\n        if (!TrigIt.hasClass(\"Mapper\") || !TrigIt.hasClass(\"FieldMapper\")) {\n            TrigIt.getMethod(simpleName()).setProtected();\n        }\n    }\n}\n";

    #[test]
    fn empty_project() {
        let p = project(&[]);
        assert!(p.model.classes.is_empty());
        assert!(p.model.java_files.is_empty());
        assert!(p.model.build_configs.is_empty());
    }

    #[test]
    fn mapper_model() {
        let p = project(&[("Mapper.java", MAPPER)]);
        let names: Vec<_> = p.model.classes.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["Mapper"]);
        let methods: Vec<_> = p.model.classes[0]
            .methods
            .iter()
            .map(|m| m.name.as_str())
            .collect();
        assert_eq!(methods, ["simpleName", "checkMerge"]);
        assert!(p.model.classes[0].methods[1].is_trigit_method);
        assert!(!p.model.classes[0].methods[0].is_trigit_method);

        let l = p.model.lookup(&Selector::Method {
            class: "Mapper",
            name: "simpleName",
        });
        match l.element {
            Some(Element::Method(_, m)) => {
                assert_eq!(m.modifiers.visibility, Visibility::Public);
                assert!(m.modifiers.is_final);
                assert_eq!(m.decl.line, 4);
            }
            _ => panic!(),
        }
        assert!(p.model.lookup(&Selector::Class("Mapper")).element.is_some());
        assert!(p
            .model
            .lookup(&Selector::Field {
                class: "Mapper",
                name: "zzz"
            })
            .element
            .is_none());
    }

    #[test]
    fn nested_classes_are_flattened() {
        let p = project(&[(
            "a/Outer.java",
            "package a;\nclass Outer { class Inner { int x; } static class Other {} }",
        )]);
        let q: Vec<_> = p
            .model
            .classes
            .iter()
            .map(|c| c.qualified_name.as_str())
            .collect();
        assert_eq!(q, ["a.Outer", "a.Outer.Inner", "a.Outer.Other"]);
        assert_eq!(p.model.classes[1].enclosing, Some(0));
        assert!(p.model.has_class("Inner"));
        assert!(p.model.has_class("a.Outer.Inner"));
    }

    #[test]
    fn ambiguous_simple_name_resolves_first_with_warning() {
        let p = project(&[
            ("b/X.java", "package b; class X {}"),
            ("a/X.java", "package a; class X {}"),
        ]);
        let (idx, warn) = p.model.find_class("X");
        assert_eq!(p.model.classes[idx.unwrap()].qualified_name, "a.X");
        assert!(warn.unwrap().contains("ambiguous"));
    }

    #[test]
    fn strict_and_lenient_loading() {
        let files = vec![
            ("Good.java".to_string(), "class Good {}".to_string()),
            ("Bad.java".to_string(), "class Bad { while }".to_string()),
            ("trigit.properties".to_string(), "nothing=here".to_string()),
        ];
        match Project::from_sources(files.clone(), false) {
            Err(LoadError::Invalid(errs)) => assert_eq!(errs.len(), 2),
            other => panic!("{other:?}"),
        }
        let p = Project::from_sources(files, true).unwrap();
        assert_eq!(p.model.classes.len(), 1);
        assert_eq!(p.errors.len(), 2);
    }

    #[test]
    fn reads_directory_tree() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir_all(dir.path().join("src/p")).unwrap();
        std::fs::create_dir_all(dir.path().join(".git")).unwrap();
        std::fs::write(dir.path().join("src/p/A.java"), "package p; class A {}").unwrap();
        std::fs::write(dir.path().join(".git/B.java"), "class B {}").unwrap();
        std::fs::write(dir.path().join("trigit.properties"), "java.version=1.7").unwrap();
        std::fs::write(dir.path().join("README"), "x").unwrap();
        let p = build_project_model(dir.path(), false).unwrap();
        assert_eq!(p.files.len(), 1);
        assert_eq!(p.files[0].path, "src/p/A.java");
        assert_eq!(p.model.build_configs.len(), 1);
        assert!(build_project_model(&dir.path().join("missing"), false).is_err());
    }
}
