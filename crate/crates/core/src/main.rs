fn main() {
    std::process::exit(ising_select::cli::run(std::env::args_os()));
}
