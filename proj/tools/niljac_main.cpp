// niljac: exact tools for three-variable polynomial maps with nilpotent
// Jacobian.  All real work lives in the header library; this file only
// parses arguments and reads files.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "niljac/cli.hpp"

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw niljac::Error("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact tools for three-variable polynomial maps with nilpotent Jacobian"};
    app.require_subcommand(1);

    std::string map_path, param_path, space_path, family, expr;
    std::string field = "Q", matrix, shear;
    bool swap = false;
    unsigned workers = 1;
    std::optional<std::uint64_t> seed;

    auto* check = app.add_subcommand("check", "residual system and nilpotency verdict");
    check->add_option("map", map_path, "map file ('-' for stdin)")->required();

    auto* depend = app.add_subcommand("depend", "linear dependence of the components");
    depend->add_option("map", map_path, "map file ('-' for stdin)")->required();

    auto* classify = app.add_subcommand("classify",
                                        "classify up to the shear/swap conjugator family");
    classify->add_option("map", map_path, "map file ('-' for stdin)")->required();

    auto* gen = app.add_subcommand("gen", "generate a map from family parameters");
    gen->add_option("family", family, "thm22, prop31 or thm33")->required();
    gen->add_option("params", param_path, "parameter file ('-' for stdin)")->required();

    auto* lemma = app.add_subcommand("lemma21", "shift extraction Q = g(y + a(x))");
    lemma->add_option("poly", expr, "polynomial in x, y")->required();
    lemma->add_option("--field", field, "Q (default) or GF(p)");

    auto* conj = app.add_subcommand("conjugate", "emit the conjugate T^-1 o H o T");
    conj->add_option("map", map_path, "map file ('-' for stdin)")->required();
    conj->add_option("--matrix", matrix, "row-major 'a,b,c;d,e,f;g,h,i'");
    conj->add_option("--shear", shear, "unit shear parameter");
    conj->add_flag("--swap", swap, "swap the first two coordinates");

    auto* search = app.add_subcommand("search", "survey a finitely supported space");
    search->add_option("space", space_path, "space file ('-' for stdin)")->required();
    search->add_option("--workers", workers, "worker thread count (default 1)");
    search->add_option("--seed", seed, "override the sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    return niljac::cli_guard(std::cerr, [&]() -> int {
        if (check->parsed()) return niljac::cmd_check(read_input(map_path), std::cout);
        if (depend->parsed()) return niljac::cmd_depend(read_input(map_path), std::cout);
        if (classify->parsed())
            return niljac::cmd_classify(read_input(map_path), std::cout);
        if (gen->parsed())
            return niljac::cmd_gen(family, read_input(param_path), std::cout);
        if (lemma->parsed()) return niljac::cmd_lemma21(expr, field, std::cout);
        if (conj->parsed())
            return niljac::cmd_conjugate(read_input(map_path), matrix, shear, swap,
                                         std::cout);
        if (search->parsed())
            return niljac::cmd_search(read_input(space_path), workers, seed, std::cout);
        return 2;
    });
}
