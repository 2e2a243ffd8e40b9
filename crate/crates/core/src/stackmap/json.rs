use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use super::{Family, StackMap, VertexId};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: VertexId,
    /// Insertion index: boundary vertices first, then birth order.
    pub birth: u32,
    /// Face the vertex was inserted in; absent for boundary vertices.
    pub word: Option<Word>,
}

/// Interchange form of a map. Faces are the finite faces keyed by word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    pub family: Family,
    pub vertices: Vec<VertexJson>,
    pub root_edge: [VertexId; 2],
    pub edges: Vec<[VertexId; 2]>,
    pub faces: BTreeMap<String, Vec<VertexId>>,
    pub tree: String,
}

impl From<&StackMap> for MapJson {
    fn from(m: &StackMap) -> Self {
        let (r0, r1) = m.root_edge();
        MapJson {
            family: m.family(),
            vertices: (0..m.n_vertices() as VertexId)
                .map(|v| VertexJson {
                    id: v,
                    birth: v,
                    word: m.vertex_word(v),
                })
                .collect(),
            root_edge: [r0, r1],
            edges: m.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            faces: m
                .leaf_faces_lex()
                .into_iter()
                .map(|f| (m.face_word(f).to_digits(), m.face_vertices(f).to_vec()))
                .collect(),
            tree: m.tree().to_paren(),
        }
    }
}

impl Serialize for StackMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MapJson::from(self).serialize(s)
    }
}
