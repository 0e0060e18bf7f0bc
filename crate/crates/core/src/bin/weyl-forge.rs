fn main() {
    std::process::exit(weyl_forge::cli::run(std::env::args_os()));
}
