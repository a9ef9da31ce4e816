"""geoik: closed-form geometric inverse kinematics for a 7-DOF arm."""

__version__ = "0.1.0"
__app_name__ = "geoik"
