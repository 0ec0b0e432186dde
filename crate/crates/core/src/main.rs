fn main() {
    std::process::exit(anyon_chronos::cli::run(std::env::args_os()));
}
