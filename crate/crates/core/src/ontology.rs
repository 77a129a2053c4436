//! Domain ontology: the six-class observation taxonomy, a configurable tree of
//! domain classes beneath it, per-class qualifier vocabularies, and the class
//! similarity table that feeds the semantic proximity.
//!
//! An [`Ontology`] is loaded from a declarative TOML file (see
//! `config/ontology.toml` in the repository) so that new domains can be wired
//! in without code changes. The built-in default covers fires, fire brigades
//! and buildings plus a couple of stub classes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The two super-families every observation class belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemanticFamily {
    /// Directly observable entities: objects, actors, means.
    Concrete,
    /// Indirectly observed activity: phenomena, actions, messages.
    Virtual,
}

/// The six generic observation kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemanticKind {
    Object,
    Actor,
    Means,
    Phenomenon,
    Action,
    Message,
}

impl SemanticKind {
    pub const ALL: [SemanticKind; 6] = [
        SemanticKind::Object,
        SemanticKind::Actor,
        SemanticKind::Means,
        SemanticKind::Phenomenon,
        SemanticKind::Action,
        SemanticKind::Message,
    ];

    /// Every kind determines its family.
    pub fn family(self) -> SemanticFamily {
        match self {
            SemanticKind::Object | SemanticKind::Actor | SemanticKind::Means => {
                SemanticFamily::Concrete
            }
            SemanticKind::Phenomenon | SemanticKind::Action | SemanticKind::Message => {
                SemanticFamily::Virtual
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SemanticKind::Object => "Object",
            SemanticKind::Actor => "Actor",
            SemanticKind::Means => "Means",
            SemanticKind::Phenomenon => "Phenomenon",
            SemanticKind::Action => "Action",
            SemanticKind::Message => "Message",
        }
    }

    fn from_name(name: &str) -> Option<SemanticKind> {
        SemanticKind::ALL.iter().copied().find(|k| k.name() == name)
    }
}

/// A kind together with the family it implies. The only constructor derives
/// the family from the kind, so mismatched pairs cannot be built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticClass {
    family: SemanticFamily,
    kind: SemanticKind,
}

impl SemanticClass {
    pub fn from_kind(kind: SemanticKind) -> SemanticClass {
        SemanticClass {
            family: kind.family(),
            kind,
        }
    }

    pub fn family(&self) -> SemanticFamily {
        self.family
    }

    pub fn kind(&self) -> SemanticKind {
        self.kind
    }
}

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("no class prefix rule matches object id `{0}`")]
    UnknownClassPrefix(String),
    #[error("ontology config: {0}")]
    Config(String),
}

/// One named class in the domain tree.
#[derive(Debug, Clone)]
pub struct ClassInfo {
    pub name: String,
    /// Parent class name, or one of Object/Actor/Means/Phenomenon/Action/Message.
    pub parent: String,
    /// The six-kind root this class ultimately hangs under.
    pub kind: SemanticKind,
    /// Object-id prefixes (the part before `#`) resolving to this class.
    pub prefixes: Vec<String>,
    /// Qualifier names allowed on observations of this class.
    pub qualifiers: Vec<String>,
}

/// Declarative ontology description as it appears on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OntologyConfig {
    #[serde(default)]
    pub classes: Vec<ClassConfig>,
    #[serde(default)]
    pub similarity: SimilarityConfig,
    /// Accepted alternative spellings, mapped to canonical qualifier names.
    #[serde(default)]
    pub qualifier_aliases: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassConfig {
    pub name: String,
    /// Another class name or one of the six kind roots.
    pub parent: String,
    #[serde(default)]
    pub prefixes: Vec<String>,
    #[serde(default)]
    pub qualifiers: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimilarityConfig {
    /// Similarity of two distinct classes with no explicit entry.
    #[serde(default)]
    pub default: f64,
    /// Similarity of two distinct objects of the same class, unless the class
    /// has an explicit self entry.
    #[serde(default = "default_same_class")]
    pub same_class_default: f64,
    #[serde(default)]
    pub entries: Vec<SimilarityEntry>,
}

fn default_same_class() -> f64 {
    0.5
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        SimilarityConfig {
            default: 0.0,
            same_class_default: default_same_class(),
            entries: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimilarityEntry {
    pub classes: [String; 2],
    pub value: f64,
}

/// Validated, query-ready ontology.
#[derive(Debug, Clone)]
pub struct Ontology {
    classes: BTreeMap<String, ClassInfo>,
    prefix_rules: BTreeMap<String, String>,
    /// Keyed by lexicographically sorted class-name pair. A `(c, c)` entry
    /// holds the distinct-object similarity for class `c`.
    similarity: BTreeMap<(String, String), f64>,
    default_similarity: f64,
    same_class_default: f64,
    qualifier_aliases: BTreeMap<String, String>,
}

impl Ontology {
    /// Build and validate an ontology from its declarative form.
    pub fn from_config(config: &OntologyConfig) -> Result<Ontology, OntologyError> {
        let mut classes: BTreeMap<String, ClassInfo> = BTreeMap::new();
        let mut prefix_rules: BTreeMap<String, String> = BTreeMap::new();

        for class in &config.classes {
            if class.name.is_empty() {
                return Err(OntologyError::Config("class with empty name".into()));
            }
            if SemanticKind::from_name(&class.name).is_some() {
                return Err(OntologyError::Config(format!(
                    "class name `{}` shadows a taxonomy root",
                    class.name
                )));
            }
            if classes.contains_key(&class.name) {
                return Err(OntologyError::Config(format!(
                    "duplicate class `{}`",
                    class.name
                )));
            }
            // Parent must already be defined: the config lists the tree top-down.
            let kind = match SemanticKind::from_name(&class.parent) {
                Some(kind) => kind,
                None => match classes.get(&class.parent) {
                    Some(parent) => parent.kind,
                    None => {
                        return Err(OntologyError::Config(format!(
                            "class `{}` has unknown parent `{}`",
                            class.name, class.parent
                        )))
                    }
                },
            };
            for prefix in &class.prefixes {
                if prefix.is_empty() {
                    return Err(OntologyError::Config(format!(
                        "class `{}` declares an empty prefix",
                        class.name
                    )));
                }
                if let Some(owner) = prefix_rules.insert(prefix.clone(), class.name.clone()) {
                    return Err(OntologyError::Config(format!(
                        "prefix `{}` claimed by both `{}` and `{}`",
                        prefix, owner, class.name
                    )));
                }
            }
            classes.insert(
                class.name.clone(),
                ClassInfo {
                    name: class.name.clone(),
                    parent: class.parent.clone(),
                    kind,
                    prefixes: class.prefixes.clone(),
                    qualifiers: class.qualifiers.clone(),
                },
            );
        }

        let mut similarity = BTreeMap::new();
        for entry in &config.similarity.entries {
            for name in &entry.classes {
                if !classes.contains_key(name) {
                    return Err(OntologyError::Config(format!(
                        "similarity entry references unknown class `{name}`"
                    )));
                }
            }
            if !(-1.0..=1.0).contains(&entry.value) {
                return Err(OntologyError::Config(format!(
                    "similarity {} <-> {} = {} outside [-1, 1]",
                    entry.classes[0], entry.classes[1], entry.value
                )));
            }
            let key = sorted_pair(&entry.classes[0], &entry.classes[1]);
            if similarity.insert(key, entry.value).is_some() {
                return Err(OntologyError::Config(format!(
                    "duplicate similarity entry {} <-> {}",
                    entry.classes[0], entry.classes[1]
                )));
            }
        }
        for value in [
            config.similarity.default,
            config.similarity.same_class_default,
        ] {
            if !(-1.0..=1.0).contains(&value) {
                return Err(OntologyError::Config(format!(
                    "similarity default {value} outside [-1, 1]"
                )));
            }
        }

        Ok(Ontology {
            classes,
            prefix_rules,
            similarity,
            default_similarity: config.similarity.default,
            same_class_default: config.similarity.same_class_default,
            qualifier_aliases: config.qualifier_aliases.clone(),
        })
    }

    /// Parse the TOML ontology file format.
    pub fn from_toml(text: &str) -> Result<Ontology, OntologyError> {
        let config: OntologyConfig =
            toml::from_str(text).map_err(|e| OntologyError::Config(e.to_string()))?;
        Ontology::from_config(&config)
    }

    /// Resolve an object id (`fire#14`) to its leaf class and semantic class
    /// via the prefix rules.
    pub fn classify(&self, object_id: &str) -> Result<(&ClassInfo, SemanticClass), OntologyError> {
        let prefix = object_id.split('#').next().unwrap_or(object_id);
        let class_name = self
            .prefix_rules
            .get(prefix)
            .ok_or_else(|| OntologyError::UnknownClassPrefix(object_id.to_string()))?;
        let info = &self.classes[class_name];
        Ok((info, SemanticClass::from_kind(info.kind)))
    }

    pub fn class(&self, name: &str) -> Option<&ClassInfo> {
        self.classes.get(name)
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassInfo> {
        self.classes.values()
    }

    /// Class-to-class similarity. Symmetric, entries in [-1, 1], and
    /// `class_similarity(c, c) = 1` for every class: a class is fully similar
    /// to itself. The discounted value for *distinct objects* of one class
    /// lives in [`Ontology::pair_similarity`].
    pub fn class_similarity(&self, a: &str, b: &str) -> f64 {
        if a == b {
            return 1.0;
        }
        self.similarity
            .get(&sorted_pair(a, b))
            .copied()
            .unwrap_or(self.default_similarity)
    }

    /// Similarity used when comparing two *distinct* objects: the table entry
    /// for distinct classes, and the same-class entry (or its default) when
    /// the classes coincide.
    pub fn pair_similarity(&self, a: &str, b: &str) -> f64 {
        if a == b {
            self.similarity
                .get(&sorted_pair(a, b))
                .copied()
                .unwrap_or(self.same_class_default)
        } else {
            self.class_similarity(a, b)
        }
    }

    /// Canonical spelling of a qualifier name (resolves configured aliases).
    pub fn canonical_qualifier<'a>(&'a self, name: &'a str) -> &'a str {
        match self.qualifier_aliases.get(name) {
            Some(canonical) => canonical.as_str(),
            None => name,
        }
    }

    /// Whether `qualifier` may appear on observations of `class_name`.
    pub fn allows_qualifier(&self, class_name: &str, qualifier: &str) -> bool {
        self.classes
            .get(class_name)
            .map(|c| c.qualifiers.iter().any(|q| q == qualifier))
            .unwrap_or(false)
    }

    /// The fires / fire brigades / buildings ontology shipped with the engine.
    /// Kept in sync with `config/ontology.toml` by a test.
    pub fn default_rcr() -> Ontology {
        Ontology::from_toml(DEFAULT_ONTOLOGY_TOML).expect("built-in ontology is valid")
    }
}

fn sorted_pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Built-in copy of `config/ontology.toml`.
pub const DEFAULT_ONTOLOGY_TOML: &str = include_str!("default_ontology.toml");
