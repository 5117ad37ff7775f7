//! Toric and lattice ideals of `A` and `𝒜`, partial characters, the twisted
//! ideals `I_{A,ρ}` and `I^τ_{A,ρ}`, and the minimal primes of `I_𝒜`.

mod character;
mod ideals;

pub use character::{extend_character, twist_automorphism, FullCharacter, PartialCharacter};
pub use ideals::{
    binomial_of, characters_trivial_on_icala, classify_graded_binomial_prime, face_ideal_with_face_character,
    face_kernel, face_twisted_ideal, kernel_basis_free, markov_basis, minimal_primes_icala, power_ideal,
    toric_ideal_ia, toric_ideal_icala, twisted_ideal, Classification, MinimalPrime,
};
