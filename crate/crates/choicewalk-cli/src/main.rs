fn main() {
    std::process::exit(choicewalk_cli::run(std::env::args()));
}
