fn main() {
    std::process::exit(ldp_subgraph::cli::main_with(std::env::args_os()));
}
