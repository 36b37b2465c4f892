//! Movies of link diagrams and the chain maps they induce.

pub mod invert;
pub mod maps;
pub mod moves;
pub mod movie;
pub mod reidemeister;

pub use invert::{invert_move, reverse_movie};
pub use maps::BlockMap;
pub use moves::{find_isomorphism, remove_crossings, MovieMove};
pub use movie::{
    compose_movie, elementary_map, functional_on_homology, homology_map, induced_functional, is_plus_minus_identity,
    pull_back, Functional, Movie, MOVIE_FORMAT_VERSION,
};
