//! Canonical example database used across the test suites: a small social
//! network of six persons, three interest tags and two forums, with three
//! overlapping interest communities registered as logical graphs.

use crate::{props, EpgmDatabase};

/// Label registration order for the example dataset. Seeding a store
/// dictionary in this order yields the canonical label ids
/// (`Person` = 0, `Forum` = 1, `knows` = 2, `hasMember` = 3,
/// `hasModerator` = 4, `Community` = 5).
pub const EXAMPLE_LABELS: [&str; 9] = [
    "Person",
    "Forum",
    "knows",
    "hasMember",
    "hasModerator",
    "Community",
    "Tag",
    "hasInterest",
    "hasTag",
];

/// Build the example database: 11 vertices (v0..v10), 24 edges (e0..e23) and
/// 3 community graphs (G0..G2).
///
/// Element layout:
///
/// ```text
/// v0  Person Alice (Leipzig)    v6  Tag Databases
/// v1  Person Bob (Leipzig)      v7  Tag Graphs
/// v2  Person Carol (Dresden)    v8  Tag Hadoop
/// v3  Person Dave (Dresden)     v9  Forum "Graph Databases"
/// v4  Person Eve (Leipzig)      v10 Forum "Graph Processing"
/// v5  Person Frank (Berlin)
///
/// knows: e0 v0->v1, e1 v1->v0, e2 v1->v2, e3 v2->v1, e4 v2->v3, e5 v3->v2,
///        e6 v4->v1, e7 v5->v2, e8 v5->v3, e11 v4->v2, e21 v4->v0
/// hasInterest: e9 v4->v6, e10 v5->v8, e14 v2->v8
/// hasTag: e12 v10->v7, e13 v10->v8, e22 v9->v6, e23 v9->v7
/// hasModerator: e15 v9->v0, e16 v10->v3
/// hasMember: e17 v9->v0, e18 v9->v1, e19 v10->v2, e20 v10->v3
///
/// G0 Community(Databases): V {v0,v1,v4}     E {e0,e1,e6,e21}
/// G1 Community(Hadoop):    V {v2,v3,v5}     E {e4,e5,e7,e8}
/// G2 Community(Graphs):    V {v0,v1,v2,v3}  E {e0..e5}
/// ```
///
/// Note the deliberate quirks: e11 (v4->v2) belongs to no community because
/// v2 is outside G0's vertex set, and per-source edge indexes are explicit
/// because they do not follow global edge-id order (v9 created its member
/// edges before its moderator edge).
pub fn example_db() -> EpgmDatabase {
    let mut db = EpgmDatabase::new();

    // Persons v0..v5. Only Alice is not older than 20, and v4/v5 carry
    // different extra keys (no schema is enforced across a label).
    let v0 = db.add_vertex(
        "Person",
        props! { "name" => "Alice", "gender" => "f", "city" => "Leipzig", "age" => 20i64 },
    );
    let v1 = db.add_vertex(
        "Person",
        props! { "name" => "Bob", "gender" => "m", "city" => "Leipzig", "age" => 30i64 },
    );
    let v2 = db.add_vertex(
        "Person",
        props! { "name" => "Carol", "gender" => "f", "city" => "Dresden", "age" => 32i64 },
    );
    let v3 = db.add_vertex(
        "Person",
        props! { "name" => "Dave", "gender" => "m", "city" => "Dresden", "age" => 40i64 },
    );
    let v4 = db.add_vertex(
        "Person",
        props! { "name" => "Eve", "gender" => "f", "city" => "Leipzig", "age" => 25i64,
        "speaks" => "English" },
    );
    let v5 = db.add_vertex(
        "Person",
        props! { "name" => "Frank", "gender" => "m", "city" => "Berlin", "age" => 35i64,
        "locIP" => "127.0.0.1" },
    );

    // Tags and forums.
    let v6 = db.add_vertex("Tag", props! { "name" => "Databases" });
    let v7 = db.add_vertex("Tag", props! { "name" => "Graphs" });
    let v8 = db.add_vertex("Tag", props! { "name" => "Hadoop" });
    let v9 = db.add_vertex("Forum", props! { "title" => "Graph Databases" });
    let v10 = db.add_vertex("Forum", props! { "title" => "Graph Processing" });

    let edge = |db: &mut EpgmDatabase, s, t, label, idx, props| {
        db.add_edge_with_index(s, t, label, props, idx).unwrap()
    };

    edge(&mut db, v0, v1, "knows", 0, props! { "since" => 2014i64 }); // e0
    edge(&mut db, v1, v0, "knows", 0, props! { "since" => 2014i64 }); // e1
    edge(&mut db, v1, v2, "knows", 1, props! { "since" => 2013i64 }); // e2
    edge(&mut db, v2, v1, "knows", 0, props! { "since" => 2013i64 }); // e3
    edge(&mut db, v2, v3, "knows", 1, props! { "since" => 2015i64 }); // e4
    edge(&mut db, v3, v2, "knows", 0, props! { "since" => 2015i64 }); // e5
    edge(&mut db, v4, v1, "knows", 0, props! { "since" => 2013i64 }); // e6
    edge(&mut db, v5, v2, "knows", 0, props! { "since" => 2015i64 }); // e7
    edge(&mut db, v5, v3, "knows", 1, props! { "since" => 2015i64 }); // e8
    edge(&mut db, v4, v6, "hasInterest", 3, props! {}); // e9
    edge(&mut db, v5, v8, "hasInterest", 2, props! {}); // e10
    edge(&mut db, v4, v2, "knows", 1, props! { "since" => 2015i64 }); // e11
    edge(&mut db, v10, v7, "hasTag", 3, props! {}); // e12
    edge(&mut db, v10, v8, "hasTag", 4, props! {}); // e13
    edge(&mut db, v2, v8, "hasInterest", 2, props! {}); // e14
    edge(&mut db, v9, v0, "hasModerator", 2, props! {}); // e15
    edge(&mut db, v10, v3, "hasModerator", 2, props! {}); // e16
    edge(&mut db, v9, v0, "hasMember", 0, props! {}); // e17
    edge(&mut db, v9, v1, "hasMember", 1, props! {}); // e18
    edge(&mut db, v10, v2, "hasMember", 0, props! {}); // e19
    edge(&mut db, v10, v3, "hasMember", 1, props! {}); // e20
    edge(&mut db, v4, v0, "knows", 2, props! { "since" => 2014i64 }); // e21
    edge(&mut db, v9, v6, "hasTag", 3, props! {}); // e22
    edge(&mut db, v9, v7, "hasTag", 4, props! {}); // e23

    db.create_logical_graph(
        "Community",
        props! { "interest" => "Databases", "vertexCount" => 3i64 },
        [v0, v1, v4],
        [0, 1, 6, 21],
    )
    .unwrap();
    db.create_logical_graph(
        "Community",
        props! { "interest" => "Hadoop", "vertexCount" => 3i64 },
        [v2, v3, v5],
        [4, 5, 7, 8],
    )
    .unwrap();
    db.create_logical_graph(
        "Community",
        props! { "interest" => "Graphs", "vertexCount" => 4i64 },
        [v0, v1, v2, v3],
        [0, 1, 2, 3, 4, 5],
    )
    .unwrap();

    db.assert_consistent();
    db
}
