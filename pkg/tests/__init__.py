# Tests package for the joint radiograph pipeline
