#include "pushrl/contact.hpp"

#include <cmath>

namespace pushrl {

ContactInfo resolve_contact(const RobotState& robot, const ObjectParams& params, const ObjectState& state) {
  ContactInfo info;
  info.contact_point = robot.ee_pos_world;
  info.contact_height = robot.ee_pos_world.z();

  const ObjectFrame frame = object_frame(params, state);
  const Vec3 p = frame.to_object(robot.ee_pos_world);
  const double half_z = 0.5 * params.dims.z();
  if (p.z() < -half_z || p.z() > half_z) return info;

  if (params.shape == Shape::kCylinder) {
    const double rho = std::hypot(p.x(), p.y());
    const double pen = params.radius() - rho;
    if (pen <= 0.0 || rho < 1e-12) return info;
    info.in_contact = true;
    info.penetration = pen;
    const Vec3 n_obj(-p.x() / rho, -p.y() / rho, 0.0);
    info.inward_normal = frame.rotation * n_obj;
    info.face_index = -1;
    return info;
  }

  const double sdx = 0.5 * params.dims.x() - std::abs(p.x());
  const double sdy = 0.5 * params.dims.y() - std::abs(p.y());
  if (sdx <= 0.0 || sdy <= 0.0) return info;
  info.in_contact = true;
  Vec3 n_obj;
  if (sdx <= sdy) {
    info.penetration = sdx;
    info.face_index = p.x() >= 0.0 ? 0 : 2;
    n_obj = Vec3(p.x() >= 0.0 ? -1.0 : 1.0, 0.0, 0.0);
  } else {
    info.penetration = sdy;
    info.face_index = p.y() >= 0.0 ? 1 : 3;
    n_obj = Vec3(0.0, p.y() >= 0.0 ? -1.0 : 1.0, 0.0);
  }
  info.inward_normal = frame.rotation * n_obj;
  return info;
}

}  // namespace pushrl
