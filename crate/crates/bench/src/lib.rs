//! Shared benchmark instances.

use credence::logic::{parse_formula, Formula};
use credence::rational::{frac, int};
use credence::{world_space, CredalSet, ProbStatement};

/// The two-atom compound-experiment set whose posterior is 27/31.
pub fn urn_set() -> (CredalSet, Formula, Formula) {
    let space = world_space(&["typeI", "black"]).unwrap();
    let type_i = parse_formula("typeI", &space).unwrap();
    let black = parse_formula("black", &space).unwrap();
    let not_type_i = parse_formula("!typeI", &space).unwrap();
    let set = CredalSet::new(
        space,
        vec![
            ProbStatement::equals(type_i.clone(), frac(3, 5)).unwrap(),
            ProbStatement::conditional(black.clone(), type_i.clone(), frac(9, 10), frac(9, 10))
                .unwrap(),
            ProbStatement::conditional(black.clone(), not_type_i, frac(1, 5), frac(1, 5)).unwrap(),
        ],
    );
    (set, type_i, black)
}

/// Twelve-atom space with a query, an evidence atom and ten candidate
/// expansion targets; constraints mention the query and two targets.
pub fn expansion_instance() -> (CredalSet, Formula, Vec<Formula>, Formula) {
    let names: Vec<String> = ["c".to_string(), "e".to_string()]
        .into_iter()
        .chain((0..10).map(|i| format!("d{i}")))
        .collect();
    let space = world_space(&names).unwrap();
    let c = parse_formula("c", &space).unwrap();
    let e = parse_formula("e", &space).unwrap();
    let statements = vec![
        ProbStatement::conditional(c.clone(), e.clone(), frac(1, 2), frac(3, 5)).unwrap(),
        ProbStatement::conditional(
            parse_formula("d0", &space).unwrap(),
            e.clone(),
            frac(9, 10),
            int(1),
        )
        .unwrap(),
        ProbStatement::conditional(
            parse_formula("d1", &space).unwrap(),
            e.clone(),
            frac(17, 20),
            frac(19, 20),
        )
        .unwrap(),
    ];
    let targets: Vec<Formula> = (0..10)
        .map(|i| parse_formula(&format!("d{i}"), &space).unwrap())
        .collect();
    let set = CredalSet::new(space, statements);
    (set, c, targets, e)
}
