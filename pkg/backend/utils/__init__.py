# Utils package initialization 