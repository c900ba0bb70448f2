pub mod certify;
pub mod congruence;
pub mod finite;
pub mod freequot;
pub mod oracles;
pub mod tower;
pub mod treeauto;
pub mod words;
pub mod zlattice;
