//! Binomial Gröbner bases of lattice ideals and their use as test sets.

mod binomial;
mod buchberger;
mod ip;
mod order;
mod probe;

pub use binomial::{
    binomials_from_rows, generators_from_lattice_basis, normal_form, normal_form_monomial,
    positive_row_combination, Binomial,
};
pub use buchberger::{
    buchberger, buchberger_with_budget, check_reduced, initial_ideal, is_square_free,
    lattice_ideal_gb, lattice_ideal_gb_any, reduce_basis, BuchbergerStats, Budget, GbFile,
    GbHeader, GroebnerBasis,
};
pub use ip::{apply_move, ip_brute_force, ip_solve, IPInstance, IpSolution};
pub use order::TermOrder;
pub use probe::{
    central_perturbations, cost_for_point, cost_signs, crossing_cost, groebner_fan_probe,
    random_costs, standard_probe_costs, ProbeEntry, ProbeReport,
};
