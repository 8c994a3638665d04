//! JSON encoding of labels and presheaf documents.
//!
//! A presheaf document looks like
//!
//! ```json
//! {
//!   "site": {"max_card": 4, "max_cover_size": 2},
//!   "values": {"0": [..], "1": [..], ...},
//!   "restrictions": {"2->3:2,0": [..], ...}
//! }
//! ```
//!
//! Restriction keys name a site map as `dom->cod:` followed by the codomain
//! index of each domain element. The table lists, for each element of the
//! value at `cod` in the order given under `values`, the position of its
//! restriction in the value at `dom`. Every site map must be present.

use std::collections::BTreeMap;
use std::sync::Arc;

use condensed::finset::{FinMap, FinSet};
use condensed::label::{Label, Side};
use condensed::presheaf::Presheaf;
use condensed::site::{MapId, Site};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteSpec {
    pub max_card: usize,
    pub max_cover_size: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafDoc {
    pub site: SiteSpec,
    pub values: BTreeMap<String, Vec<Value>>,
    pub restrictions: BTreeMap<String, Vec<usize>>,
}

pub fn label_to_json(l: &Label) -> Value {
    match l {
        Label::Int(i) => json!(i),
        Label::Name(s) => json!(s.as_ref()),
        Label::Tuple(items) => Value::Array(items.iter().map(label_to_json).collect()),
        Label::Set(items) => json!({ "set": items.iter().map(label_to_json).collect::<Vec<_>>() }),
        Label::Tagged(Side::L, inner) => json!({ "L": label_to_json(inner) }),
        Label::Tagged(Side::R, inner) => json!({ "R": label_to_json(inner) }),
        Label::Principal(inner) => json!({ "principal": label_to_json(inner) }),
    }
}

pub fn label_from_json(v: &Value) -> Result<Label, CliError> {
    let bad = || CliError::Parse(format!("cannot read a label from {v}"));
    Ok(match v {
        Value::Number(n) => Label::Int(n.as_i64().ok_or_else(bad)?),
        Value::String(s) => Label::Name(Arc::from(s.as_str())),
        Value::Array(items) => Label::tuple(items.iter().map(label_from_json).collect::<Result<_, _>>()?),
        Value::Object(map) if map.len() == 1 => {
            let (k, inner) = map.iter().next().expect("one entry");
            match k.as_str() {
                "set" => {
                    let items = inner.as_array().ok_or_else(bad)?;
                    Label::set(items.iter().map(label_from_json).collect::<Result<_, _>>()?)
                }
                "L" => Label::tagged(Side::L, label_from_json(inner)?),
                "R" => Label::tagged(Side::R, label_from_json(inner)?),
                "principal" => Label::principal(label_from_json(inner)?),
                _ => return Err(bad()),
            }
        }
        _ => return Err(bad()),
    })
}

pub fn map_to_json(f: &FinMap) -> Value {
    json!({
        "dom": f.dom().iter().map(label_to_json).collect::<Vec<_>>(),
        "cod": f.cod().iter().map(label_to_json).collect::<Vec<_>>(),
        "table": f.table(),
    })
}

pub fn set_to_json(s: &FinSet) -> Value {
    Value::Array(s.iter().map(label_to_json).collect())
}

fn parse_map_key(key: &str) -> Result<MapId, CliError> {
    let bad = || CliError::Parse(format!("malformed restriction key {key:?}"));
    let (head, tail) = key.split_once(':').ok_or_else(bad)?;
    let (dom, cod) = head.split_once("->").ok_or_else(bad)?;
    let (dom, cod): (usize, usize) = (dom.trim().parse().map_err(|_| bad())?, cod.trim().parse().map_err(|_| bad())?);
    let table: Vec<usize> = if tail.trim().is_empty() {
        Vec::new()
    } else {
        tail.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if table.len() != dom || table.iter().any(|&j| j >= cod) {
        return Err(bad());
    }
    Ok(MapId { dom, cod, code: condensed::finset::encode_map(&table, cod) })
}

/// Reads a document into a validated presheaf. Structural problems are parse
/// errors; functor-law failures come from [`Presheaf::new`].
pub fn presheaf_from_doc(doc: &PresheafDoc) -> Result<Presheaf, CliError> {
    let site = Site::new(doc.site.max_card, doc.site.max_cover_size)?;
    let m = site.max_card();
    let mut values = Vec::with_capacity(m + 1);
    // position in the file -> index in the sorted carrier
    let mut positions = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let raw =
            doc.values.get(&n.to_string()).ok_or_else(|| CliError::Parse(format!("missing value for object {n}")))?;
        let labels = raw.iter().map(label_from_json).collect::<Result<Vec<_>, _>>()?;
        let set = FinSet::new(labels.iter().cloned()).map_err(|e| CliError::Parse(format!("value {n}: {e}")))?;
        positions.push(labels.iter().map(|l| set.index_of(l).expect("member")).collect::<Vec<_>>());
        values.push(set);
    }
    if let Some(extra) = doc.values.keys().find(|k| k.parse::<usize>().map_or(true, |n| n > m)) {
        return Err(CliError::Parse(format!("unexpected value key {extra:?}")));
    }
    let mut tables: BTreeMap<MapId, FinMap> = BTreeMap::new();
    for (key, raw) in &doc.restrictions {
        let id = parse_map_key(key)?;
        if id.dom > m || id.cod > m {
            return Err(CliError::Parse(format!("restriction key {key:?} leaves the site")));
        }
        let (src, dst) = (&values[id.cod], &values[id.dom]);
        if raw.len() != src.len() || raw.iter().any(|&j| j >= dst.len()) {
            return Err(CliError::Parse(format!("restriction table for {key:?} has the wrong shape")));
        }
        let mut table = vec![0; src.len()];
        for (pos, &j) in raw.iter().enumerate() {
            table[positions[id.cod][pos]] = positions[id.dom][j];
        }
        let f = FinMap::from_indices(src.clone(), dst.clone(), table).map_err(|e| CliError::Parse(e.to_string()))?;
        if tables.insert(id, f).is_some() {
            return Err(CliError::Parse(format!("restriction {key:?} given twice")));
        }
    }
    let mut restrict = vec![vec![Vec::new(); m + 1]; m + 1];
    for id in site.map_ids() {
        let f = tables.remove(&id).ok_or_else(|| CliError::Parse(format!("missing restriction for {id}")))?;
        restrict[id.dom][id.cod].push(f);
    }
    Ok(Presheaf::new(&site, values, restrict)?)
}

pub fn parse_presheaf(text: &str) -> Result<Presheaf, CliError> {
    let doc: PresheafDoc = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    presheaf_from_doc(&doc)
}

pub fn presheaf_to_doc(f: &Presheaf) -> PresheafDoc {
    let site = f.site();
    let values =
        (0..=site.max_card()).map(|n| (n.to_string(), f.value(n).iter().map(label_to_json).collect())).collect();
    let restrictions = site.map_ids().map(|id| (id.to_string(), f.restriction(id).table().to_vec())).collect();
    PresheafDoc {
        site: SiteSpec { max_card: site.max_card(), max_cover_size: site.max_cover_size() },
        values,
        restrictions,
    }
}

pub fn presheaf_to_string(f: &Presheaf) -> String {
    let mut s = serde_json::to_string_pretty(&presheaf_to_doc(f)).expect("documents serialize");
    s.push('\n');
    s
}
