use sofic_core::catalog::builtin;
use sofic_core::equations::{solvable_in, EquationSystem, SolveOptions, Verdict};
use sofic_core::{FiniteGroup, Permutation};

const SYSTEMS: [&str; 5] = [
    "constants 1; variables 1;\nx1 x1 = a1\n",
    "constants 1; variables 1;\nx1^3 = a1\n",
    "constants 1; variables 1;\na1 x1 a1^-1 x1^-1\n",
    "constants 1; variables 1;\nx1 a1 x1^-1 = a1^-1\n",
    "constants 2; variables 1;\nx1^-1 a1 x1 = a2\n",
];

fn group(name: &str) -> FiniteGroup {
    builtin(name, 1 << 20).unwrap()
}

fn verdict(g: &FiniteGroup, sys: &EquationSystem) -> Verdict {
    let v = solvable_in(g, sys, SolveOptions::default()).verdict;
    assert_ne!(v, Verdict::Unknown);
    v
}

#[test]
fn products_of_solvable_groups_stay_solvable() {
    let names = ["Z2", "Z3", "Z5", "S3", "V4"];
    let systems: Vec<EquationSystem> = SYSTEMS
        .iter()
        .map(|t| EquationSystem::parse(t).unwrap())
        .collect();
    for sys in &systems {
        for (i, a) in names.iter().enumerate() {
            for b in &names[i..] {
                let (ga, gb) = (group(a), group(b));
                if verdict(&ga, sys) == Verdict::Solvable && verdict(&gb, sys) == Verdict::Solvable
                {
                    let product =
                        FiniteGroup::direct_product(format!("{a}x{b}"), &[&ga, &gb]).unwrap();
                    assert_eq!(
                        verdict(&product, sys),
                        Verdict::Solvable,
                        "{a}x{b}: {sys:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn quotients_of_solvable_groups_stay_solvable() {
    let cases: [(&str, &[&str]); 5] = [
        ("S4", &["(1 2)(3 4)", "(1 3)(2 4)"]),
        ("S3", &["(1 2 3)"]),
        ("D4", &["(1 3)(2 4)"]),
        ("Q8", &["(1 3)(2 4)(5 7)(6 8)"]),
        ("Z6", &["(1 3 5)(2 4 6)"]),
    ];
    let systems: Vec<EquationSystem> = SYSTEMS
        .iter()
        .map(|t| EquationSystem::parse(t).unwrap())
        .collect();
    for (name, normal) in cases {
        let g = group(name);
        let normal: Vec<Permutation> = normal
            .iter()
            .map(|t| Permutation::parse(t, g.degree()).unwrap())
            .collect();
        let (q, _) = g.quotient(format!("{name}/N"), &normal).unwrap();
        for sys in &systems {
            if verdict(&g, sys) == Verdict::Solvable {
                assert_eq!(verdict(&q, sys), Verdict::Solvable, "{name}: {sys:?}");
            }
        }
    }
}

#[test]
fn conjugacy_equation_decides_class_equality() {
    // ∀a1 a2 ∃x: a1^x = a2 only holds in the trivial group
    let sys = EquationSystem::parse(SYSTEMS[4]).unwrap();
    assert_eq!(verdict(&group("Z1"), &sys), Verdict::Solvable);
    let report = solvable_in(&group("Z2"), &sys, SolveOptions::default());
    assert_eq!(report.verdict, Verdict::Unsolvable);
    let c = report.counterexample.unwrap();
    assert!(c[0].is_identity() && !c[1].is_identity());
}
