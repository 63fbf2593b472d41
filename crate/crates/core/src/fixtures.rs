//! Example inputs shipped with the crate.

pub struct Fixture {
    pub name: &'static str,
    pub contents: &'static str,
}

macro_rules! fixture {
    ($name:literal) => {
        Fixture {
            name: $name,
            contents: include_str!(concat!("../fixtures/", $name)),
        }
    };
}

static FIXTURES: &[Fixture] = &[
    fixture!("jacobi_example.txt"),
    fixture!("jacobi_example.json"),
    fixture!("two_normal_forms.txt"),
    fixture!("isoperimetric_1_2.json"),
    fixture!("greenspan_gap.json"),
    fixture!("empty_row.json"),
    fixture!("linear_oscillators.txt"),
];

pub fn golden_fixtures() -> &'static [Fixture] {
    FIXTURES
}

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|f| f.name == name).map(|f| f.contents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::{parse_polynomial, DiffSystem};
    use crate::order_matrix::{isoperimetric_matrix, OrderMatrix};

    #[test]
    fn systems_parse_to_the_examples() {
        let names: Vec<String> = ["x1", "x2", "x3"].map(String::from).to_vec();
        let p = |s: &str| parse_polynomial(s, &names).unwrap();
        let sys = DiffSystem::parse(fixture("jacobi_example.txt").unwrap()).unwrap();
        assert_eq!(sys.equations(), [p("x1'' - x2'"), p("x2'' - x3"), p("x3' - x2")]);
        let sys = DiffSystem::parse(fixture("two_normal_forms.txt").unwrap()).unwrap();
        assert_eq!(sys.equations(), [p("x1'' + x2'' + x3''"), p("x2'"), p("x2 + x3")]);
    }

    #[test]
    fn matrices_parse() {
        let iso = OrderMatrix::from_json_str(fixture("isoperimetric_1_2.json").unwrap()).unwrap();
        assert_eq!(iso, isoperimetric_matrix(&[1, 2]).unwrap());
        for f in golden_fixtures().iter().filter(|f| f.name.ends_with(".json")) {
            OrderMatrix::from_json_str(f.contents).unwrap();
        }
    }
}
