#include "rblda/model_io.hpp"

#include "rblda/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rblda {

namespace {

void write_matrix(std::ostream& out, const char* name, const Matrix& m) {
    out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    char buf[40];
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ' ';
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out << buf;
        }
        out << '\n';
    }
}

Matrix read_matrix(std::istream& in, const std::string& name) {
    std::string tag, got;
    Index rows = 0, cols = 0;
    if (!(in >> tag >> got >> rows >> cols) || tag != "matrix" || got != name) {
        throw input_error("model file: expected matrix " + name);
    }
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            if (!(in >> m(i, j))) {
                throw input_error("model file: truncated matrix " + name);
            }
        }
    }
    return m;
}

} // namespace

void save_model(const std::string& path, const FittedModel& model) {
    std::ofstream out(path);
    if (!out) {
        throw input_error("cannot write " + path);
    }
    out << "rblda-model 1\n";
    out << "method " << to_string(model.method) << '\n';
    if (model.is_vector) {
        out << "kind vector\n";
        out << "scaling " << to_string(model.vector_basis.scaling) << '\n';
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", model.vector_basis.r);
        out << "r1 " << buf << '\n';
        write_matrix(out, "mean", model.vector_mean);
        write_matrix(out, "basis", model.vector_basis.basis);
        write_matrix(out, "values", model.vector_basis.values);
    } else {
        out << "kind bilinear\n";
        out << "scaling " << to_string(model.bilinear.basis.scaling) << '\n';
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", model.bilinear.r1);
        out << "r1 " << buf << '\n';
        std::snprintf(buf, sizeof(buf), "%.17g", model.bilinear.r2);
        out << "r2 " << buf << '\n';
        out << "in_u_space " << (model.bilinear.in_u_space ? 1 : 0) << '\n';
        write_matrix(out, "mean", model.bilinear.mean);
        write_matrix(out, "v1", model.bilinear.basis.v1);
        write_matrix(out, "v2", model.bilinear.basis.v2);
        write_matrix(out, "values1", model.bilinear.basis.values1);
        write_matrix(out, "values2", model.bilinear.basis.values2);
        write_matrix(out, "u1", model.bilinear.u1);
        write_matrix(out, "u2", model.bilinear.u2);
    }
    out.flush();
    if (!out) {
        throw input_error("write failed for " + path);
    }
}

FittedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw input_error("cannot open " + path);
    }
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "rblda-model" || version != 1) {
        throw input_error(path + ": not an rblda model file");
    }
    std::string key, value;
    FittedModel model;
    if (!(in >> key >> value) || key != "method") {
        throw input_error(path + ": missing method");
    }
    model.method = method_from_string(value);
    if (!(in >> key >> value) || key != "kind") {
        throw input_error(path + ": missing kind");
    }
    if (value == "vector") {
        model.is_vector = true;
        if (!(in >> key >> value) || key != "scaling") {
            throw input_error(path + ": missing scaling");
        }
        model.vector_basis.scaling = scaling_from_string(value);
        if (!(in >> key >> model.vector_basis.r) || key != "r1") {
            throw input_error(path + ": missing r1");
        }
        model.vector_mean = read_matrix(in, "mean");
        model.vector_basis.basis = read_matrix(in, "basis");
        model.vector_basis.values = read_matrix(in, "values");
    } else if (value == "bilinear") {
        if (!(in >> key >> value) || key != "scaling") {
            throw input_error(path + ": missing scaling");
        }
        model.bilinear.basis.scaling = scaling_from_string(value);
        if (!(in >> key >> model.bilinear.r1) || key != "r1") {
            throw input_error(path + ": missing r1");
        }
        if (!(in >> key >> model.bilinear.r2) || key != "r2") {
            throw input_error(path + ": missing r2");
        }
        int flag = 0;
        if (!(in >> key >> flag) || key != "in_u_space") {
            throw input_error(path + ": missing in_u_space");
        }
        model.bilinear.in_u_space = flag != 0;
        model.bilinear.mean = read_matrix(in, "mean");
        model.bilinear.basis.v1 = read_matrix(in, "v1");
        model.bilinear.basis.v2 = read_matrix(in, "v2");
        model.bilinear.basis.values1 = read_matrix(in, "values1");
        model.bilinear.basis.values2 = read_matrix(in, "values2");
        model.bilinear.u1 = read_matrix(in, "u1");
        model.bilinear.u2 = read_matrix(in, "u2");
        model.bilinear.basis.method = model.method == Method::rblda ? BilinearMethod::rblda
                                      : model.method == Method::blda ? BilinearMethod::blda
                                      : model.method == Method::pblda
                                          ? BilinearMethod::pblda
                                          : BilinearMethod::bpca;
    } else {
        throw input_error(path + ": unknown model kind \"" + value + "\"");
    }
    return model;
}

} // namespace rblda
