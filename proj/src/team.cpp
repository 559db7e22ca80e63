#include "coplan/team.hpp"

#include <algorithm>
#include <string>

#include "coplan/errors.hpp"

namespace coplan {

TeamModel TeamModel::compose(std::vector<RobotModel> robots, std::vector<ExteroPair> pairs) {
    if (robots.size() < 2) throw DimensionError("compose requires at least 2 robots");

    TeamModel model;
    model.workspace_dim_ = static_cast<int>(robots.front().workspace_proj.size());
    if (model.workspace_dim_ < 1) throw DimensionError("robot 0 has empty workspace projection");

    Index n_total = 0;
    Index m_total = 0;
    for (std::size_t r = 0; r < robots.size(); ++r) {
        const RobotModel& rm = robots[r];
        const std::string tag = "robot " + std::to_string(r);
        const Index n = rm.A.rows();
        if (rm.A.cols() != n) throw DimensionError(tag + ": A not square");
        if (rm.B.rows() != n) throw DimensionError(tag + ": B row count != state dim");
        if (rm.Q.rows() != n || rm.Q.cols() != n) throw DimensionError(tag + ": Q shape mismatch");
        if (rm.C_prop.has_value() != rm.R_prop.has_value()) {
            throw DimensionError(tag + ": C_prop and R_prop must be given together");
        }
        if (rm.C_prop) {
            if (rm.C_prop->cols() != n) throw DimensionError(tag + ": C_prop column count != state dim");
            if (rm.R_prop->rows() != rm.C_prop->rows() || rm.R_prop->cols() != rm.C_prop->rows()) {
                throw DimensionError(tag + ": R_prop shape mismatch");
            }
        }
        if (static_cast<int>(rm.workspace_proj.size()) != model.workspace_dim_) {
            throw DimensionError(tag + ": workspace projection size differs across robots");
        }
        for (Index idx : rm.workspace_proj) {
            if (idx < 0 || idx >= n) throw DimensionError(tag + ": workspace projection index out of range");
        }
        if (rm.body_radius < 0.0) throw DimensionError(tag + ": negative body radius");
        model.state_offsets_.push_back(n_total);
        model.control_offsets_.push_back(m_total);
        n_total += n;
        m_total += rm.B.cols();
    }

    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const ExteroPair& ep = pairs[p];
        const std::string tag = "pair " + std::to_string(p);
        if (ep.i == ep.j) throw DimensionError(tag + ": i == j");
        if (ep.i < 0 || ep.j < 0 || ep.i >= static_cast<int>(robots.size()) || ep.j >= static_cast<int>(robots.size())) {
            throw DimensionError(tag + ": robot index out of range");
        }
        if (ep.i > ep.j) throw DimensionError(tag + ": pairs are stored with i < j");
        const Index ni = robots[static_cast<std::size_t>(ep.i)].state_dim();
        const Index nj = robots[static_cast<std::size_t>(ep.j)].state_dim();
        if (ep.C_ext.cols() != ni + nj) throw DimensionError(tag + ": C_ext column count != n_i + n_j");
        if (ep.R_ext.rows() != ep.C_ext.rows() || ep.R_ext.cols() != ep.C_ext.rows()) {
            throw DimensionError(tag + ": R_ext shape mismatch");
        }
        if (ep.r_ext < 0.0) throw DimensionError(tag + ": negative r_ext");
    }

    model.A_ = Matrix::Zero(n_total, n_total);
    model.B_ = Matrix::Zero(n_total, m_total);
    model.Q_ = Matrix::Zero(n_total, n_total);
    for (std::size_t r = 0; r < robots.size(); ++r) {
        const RobotModel& rm = robots[r];
        const Index so = model.state_offsets_[r];
        const Index co = model.control_offsets_[r];
        model.A_.block(so, so, rm.state_dim(), rm.state_dim()) = rm.A;
        model.B_.block(so, co, rm.state_dim(), rm.control_dim()) = rm.B;
        model.Q_.block(so, so, rm.state_dim(), rm.state_dim()) = rm.Q;

        IndexList global;
        global.reserve(rm.workspace_proj.size());
        for (Index idx : rm.workspace_proj) global.push_back(so + idx);
        model.workspace_indices_.push_back(std::move(global));
    }

    model.robots_ = std::move(robots);
    model.pairs_ = std::move(pairs);
    return model;
}

Vector TeamModel::workspace_position(int i, const Vector& composed_state) const {
    if (composed_state.size() != state_dim()) throw DimensionError("workspace_position: state size mismatch");
    const IndexList& idx = workspace_indices(i);
    Vector out(static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out[static_cast<Index>(k)] = composed_state[idx[k]];
    return out;
}

void MeasurementSchedule::validate(const TeamModel& model) const {
    for (const auto& step : active_pairs) {
        for (int p : step) {
            if (p < 0 || p >= static_cast<int>(model.pairs().size())) {
                throw ArgumentError("schedule references unknown pair " + std::to_string(p));
            }
        }
    }
}

std::pair<Matrix, Matrix> assemble_measurement(const TeamModel& model, std::span<const int> active_pairs) {
    Index prop_rows = 0;
    for (const RobotModel& rm : model.robots()) {
        if (rm.C_prop) prop_rows += rm.C_prop->rows();
    }
    Index ext_rows = 0;
    for (int p : active_pairs) {
        if (p < 0 || p >= static_cast<int>(model.pairs().size())) {
            throw ArgumentError("assemble_measurement: unknown pair index " + std::to_string(p));
        }
        ext_rows += model.pair(p).C_ext.rows();
    }

    const Index rows = prop_rows + ext_rows;
    Matrix C = Matrix::Zero(rows, model.state_dim());
    Matrix R = Matrix::Zero(rows, rows);

    Index row = 0;
    for (int i = 0; i < model.num_robots(); ++i) {
        const RobotModel& rm = model.robot(i);
        if (!rm.C_prop) continue;
        const Index q = rm.C_prop->rows();
        C.block(row, model.state_block(i).start, q, rm.state_dim()) = *rm.C_prop;
        R.block(row, row, q, q) = *rm.R_prop;
        row += q;
    }
    for (int p : active_pairs) {
        const ExteroPair& ep = model.pair(p);
        const Index ni = model.robot(ep.i).state_dim();
        const Index nj = model.robot(ep.j).state_dim();
        const Index q = ep.C_ext.rows();
        C.block(row, model.state_block(ep.i).start, q, ni) = ep.C_ext.leftCols(ni);
        C.block(row, model.state_block(ep.j).start, q, nj) = ep.C_ext.rightCols(nj);
        R.block(row, row, q, q) = ep.R_ext;
        row += q;
    }
    return {std::move(C), std::move(R)};
}

bool pair_within_radius(const TeamModel& model, const Vector& composed_mean, const ExteroPair& pair) {
    const Vector pi = model.workspace_position(pair.i, composed_mean);
    const Vector pj = model.workspace_position(pair.j, composed_mean);
    return (pi - pj).norm() <= pair.r_ext;
}

} // namespace coplan
