#pragma once

namespace lcf {

/// One classical Runge-Kutta step for x' = field(t, x). Vector needs vector-space operators
/// (Eigen vectors qualify).
template <class Vector, class Field>
Vector rk4_step(Field &&field, double t, const Vector &x, double dt) {
  const double h2 = 0.5 * dt;
  const Vector k1 = field(t, x);
  const Vector k2 = field(t + h2, Vector(x + h2 * k1));
  const Vector k3 = field(t + h2, Vector(x + h2 * k2));
  const Vector k4 = field(t + dt, Vector(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace lcf
