//! Social network generator with planted communities: persons wired by a
//! stochastic block model (dense inside a community, sparse across), plus
//! forums, tags and their membership/interest edges.

use std::collections::{BTreeMap, BTreeSet};

use epgm_model::{props, EpgmDatabase};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::DatasetMeta;

pub const PERSONS_PER_SCALE: u64 = 1000;
pub const COMMUNITY_SIZE: u64 = 100;
/// Probability of a knows pair inside a community (average intra degree
/// just under 12).
const INTRA_PAIR_PROBABILITY: f64 = 0.12;
/// Cross-community knows pairs per four persons.
const INTER_PAIR_RATIO: f64 = 0.25;

const FIRST_NAMES: [&str; 12] = [
    "Alice", "Bob", "Carol", "Dave", "Eve", "Frank", "Grace", "Heidi", "Ivan", "Judy", "Mallory",
    "Niaj",
];
const CITIES: [&str; 6] = [
    "Leipzig", "Dresden", "Berlin", "Hamburg", "Munich", "Cologne",
];
const TOPICS: [&str; 15] = [
    "Databases",
    "Graphs",
    "Hadoop",
    "Music",
    "Cycling",
    "Chess",
    "Cooking",
    "Hiking",
    "Photography",
    "Astronomy",
    "Gardening",
    "Sailing",
    "Painting",
    "Running",
    "Cinema",
];

/// Generate a social network of `1000 * scale` persons in communities of
/// 100, with ground truth recorded in the metadata.
pub fn generate(scale: u32, seed: u64) -> (EpgmDatabase, DatasetMeta) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut db = EpgmDatabase::new();

    let persons = PERSONS_PER_SCALE * scale as u64;
    let communities = (persons / COMMUNITY_SIZE) as u32;
    let mut planted: BTreeMap<u64, u32> = BTreeMap::new();

    // Persons v0 .. v(n-1); community c holds ids [c*100, (c+1)*100).
    for i in 0..persons {
        let community = (i / COMMUNITY_SIZE) as u32;
        planted.insert(i, community);
        let home_city = CITIES[community as usize % CITIES.len()];
        let city = if rng.random_bool(0.6) {
            home_city
        } else {
            CITIES[rng.random_range(0..CITIES.len())]
        };
        let mut p = props! {
            "name" => format!("{} {:04}", FIRST_NAMES[(i % FIRST_NAMES.len() as u64) as usize], i),
            "city" => city,
            "age" => rng.random_range(18..66i64),
            "gender" => if rng.random_bool(0.5) { "f" } else { "m" },
        };
        if rng.random_bool(0.2) {
            p.set("speaks", "English");
        }
        db.add_vertex("Person", p);
    }

    // Tags and forums (one forum per community).
    let mut tag_ids = Vec::new();
    for topic in TOPICS {
        tag_ids.push(db.add_vertex("Tag", props! { "name" => topic }));
    }
    let mut forum_ids = Vec::new();
    for c in 0..communities {
        forum_ids.push(db.add_vertex(
            "Forum",
            props! { "title" => format!("{} Forum {c}", TOPICS[c as usize % TOPICS.len()]) },
        ));
    }

    // Intra-community knows pairs, both directions.
    let knows = |db: &mut EpgmDatabase, rng: &mut StdRng, a: u64, b: u64| {
        let since = rng.random_range(2010..2016i64);
        db.add_edge(a, b, "knows", props! { "since" => since })
            .unwrap();
        db.add_edge(b, a, "knows", props! { "since" => since })
            .unwrap();
    };
    for c in 0..communities as u64 {
        let base = c * COMMUNITY_SIZE;
        for i in base..base + COMMUNITY_SIZE {
            for j in (i + 1)..base + COMMUNITY_SIZE {
                if rng.random_bool(INTRA_PAIR_PROBABILITY) {
                    knows(&mut db, &mut rng, i, j);
                }
            }
        }
    }

    // Sparse cross-community pairs.
    let inter_pairs = (persons as f64 * INTER_PAIR_RATIO) as u64;
    let mut seen: BTreeSet<(u64, u64)> = BTreeSet::new();
    let mut placed = 0;
    while placed < inter_pairs {
        let a = rng.random_range(0..persons);
        let b = rng.random_range(0..persons);
        if planted[&a] == planted[&b] {
            continue;
        }
        let pair = (a.min(b), a.max(b));
        if !seen.insert(pair) {
            continue;
        }
        knows(&mut db, &mut rng, pair.0, pair.1);
        placed += 1;
    }

    // Forum membership: 20 members and one moderator per community forum.
    for (c, &forum) in forum_ids.iter().enumerate() {
        let base = c as u64 * COMMUNITY_SIZE;
        let mut members = BTreeSet::new();
        while members.len() < 20 {
            members.insert(base + rng.random_range(0..COMMUNITY_SIZE));
        }
        for member in members {
            db.add_edge(forum, member, "hasMember", props! {}).unwrap();
        }
        let moderator = base + rng.random_range(0..COMMUNITY_SIZE);
        db.add_edge(forum, moderator, "hasModerator", props! {})
            .unwrap();
        for _ in 0..2 {
            let tag = tag_ids[rng.random_range(0..tag_ids.len())];
            db.add_edge(forum, tag, "hasTag", props! {}).unwrap();
        }
    }

    // Direct interests.
    for person in 0..persons {
        if rng.random_bool(0.25) {
            let tag = tag_ids[rng.random_range(0..tag_ids.len())];
            db.add_edge(person, tag, "hasInterest", props! {}).unwrap();
        }
    }

    let meta = DatasetMeta {
        kind: "social".to_string(),
        scale,
        seed,
        planted_communities: planted,
        cases: None,
        invoiced_cases: None,
    };
    (db, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use epgm_model::json::DatasetJson;

    #[test]
    fn person_count_scales_linearly() {
        let (db, meta) = generate(1, 7);
        let persons = db.vertices().filter(|v| v.label == "Person").count();
        assert_eq!(persons, 1000);
        assert_eq!(meta.planted_communities.len(), 1000);
        let (db2, _) = generate(2, 7);
        let persons2 = db2.vertices().filter(|v| v.label == "Person").count();
        assert_eq!(persons2, 2000);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let (a, meta_a) = generate(1, 7);
        let (b, meta_b) = generate(1, 7);
        let text_a = DatasetJson::from_database(&a, &[])
            .to_pretty_string()
            .unwrap();
        let text_b = DatasetJson::from_database(&b, &[])
            .to_pretty_string()
            .unwrap();
        assert_eq!(text_a, text_b);
        assert_eq!(
            serde_json::to_string(&meta_a).unwrap(),
            serde_json::to_string(&meta_b).unwrap()
        );
        // A different seed actually changes the dataset.
        let (c, _) = generate(1, 8);
        let text_c = DatasetJson::from_database(&c, &[])
            .to_pretty_string()
            .unwrap();
        assert_ne!(text_a, text_c);
    }

    #[test]
    fn label_vocabulary_is_complete() {
        let (db, _) = generate(1, 7);
        let labels: BTreeSet<&str> = db.vertices().map(|v| v.label.as_str()).collect();
        assert_eq!(labels, BTreeSet::from(["Person", "Tag", "Forum"]));
        let edge_labels: BTreeSet<&str> = db.edges().map(|e| e.label.as_str()).collect();
        assert_eq!(
            edge_labels,
            BTreeSet::from([
                "knows",
                "hasMember",
                "hasModerator",
                "hasTag",
                "hasInterest"
            ])
        );
    }
}
