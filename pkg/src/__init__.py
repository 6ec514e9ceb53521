# Layers Lab Package
