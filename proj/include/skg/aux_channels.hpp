#pragma once

#include "skg/compound_source.hpp"

namespace skg {

// Components of the extended joint P(u,v,x,y,z) = P_{XYZ,s}(x,y,z) W(v|x) Q(u|v).
inline constexpr int kAuxU = 0;
inline constexpr int kAuxV = 1;
inline constexpr int kAuxX = 2;
inline constexpr int kAuxY = 3;
inline constexpr int kAuxZ = 4;

// Test channels for the Markov chain U - V - X - YZ.
struct AuxChannelPair {
  Channel v_given_x;  // |X| x |V|
  Channel u_given_v;  // |V| x |U|

  AuxChannelPair() = default;
  AuxChannelPair(Channel vx, Channel uv);

  int x_size() const { return v_given_x.inputs(); }
  int v_size() const { return v_given_x.outputs(); }
  int u_size() const { return u_given_v.outputs(); }

  // Single-layer coding: V = X and U is drawn through `u_given_x`.
  static AuxChannelPair single_layer(const Channel& u_given_x);
  // U constant, V drawn through `v_given_x`.
  static AuxChannelPair constant_u(const Channel& v_given_x);
};

// Rank-5 joint (U,V,X,Y,Z) for one state.
JointPmf aux_joint(const JointPmf& xyz, const AuxChannelPair& aux);
// Rank-3 joint (U,V,X) for an X-marginal.
JointPmf aux_joint(const Pmf& px, const AuxChannelPair& aux);

}  // namespace skg
