#include "skg/aux_channels.hpp"

namespace skg {

AuxChannelPair::AuxChannelPair(Channel vx, Channel uv)
    : v_given_x(std::move(vx)), u_given_v(std::move(uv)) {
  if (v_given_x.outputs() != u_given_v.inputs())
    throw SpecError("AuxChannelPair: |V| differs between the two channels");
}

AuxChannelPair AuxChannelPair::single_layer(const Channel& u_given_x) {
  return AuxChannelPair(Channel::identity(u_given_x.inputs()), u_given_x);
}

AuxChannelPair AuxChannelPair::constant_u(const Channel& v_given_x) {
  return AuxChannelPair(v_given_x, Channel::constant(v_given_x.outputs(), Pmf::point(1, 0)));
}

JointPmf aux_joint(const JointPmf& xyz, const AuxChannelPair& aux) {
  if (xyz.rank() != 3 || xyz.dim(0) != aux.x_size())
    throw SpecError("aux_joint: |X| mismatch between source and auxiliary channels");
  const int nu = aux.u_size(), nv = aux.v_size(), nx = xyz.dim(0), ny = xyz.dim(1),
            nz = xyz.dim(2);
  Eigen::VectorXd m(static_cast<Eigen::Index>(nu) * nv * nx * ny * nz);
  Eigen::Index f = 0;
  for (int u = 0; u < nu; ++u)
    for (int v = 0; v < nv; ++v)
      for (int x = 0; x < nx; ++x) {
        const double w = aux.v_given_x(x, v) * aux.u_given_v(v, u);
        for (int y = 0; y < ny; ++y)
          for (int z = 0; z < nz; ++z) m(f++) = w * xyz(x, y, z);
      }
  m /= m.sum();
  return JointPmf({nu, nv, nx, ny, nz}, std::move(m));
}

JointPmf aux_joint(const Pmf& px, const AuxChannelPair& aux) {
  if (px.size() != aux.x_size()) throw SpecError("aux_joint: |X| mismatch");
  const int nu = aux.u_size(), nv = aux.v_size(), nx = px.size();
  Eigen::VectorXd m(static_cast<Eigen::Index>(nu) * nv * nx);
  Eigen::Index f = 0;
  for (int u = 0; u < nu; ++u)
    for (int v = 0; v < nv; ++v)
      for (int x = 0; x < nx; ++x) m(f++) = px(x) * aux.v_given_x(x, v) * aux.u_given_v(v, u);
  m /= m.sum();
  return JointPmf({nu, nv, nx}, std::move(m));
}

}  // namespace skg
