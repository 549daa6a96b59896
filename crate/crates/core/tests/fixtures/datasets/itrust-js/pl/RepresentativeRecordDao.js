class RepresentativeRecordDao {
  updateRepresentative(representative) {
    return this.representativeStore.update(representative);
  }
  submitRepresentative(representative) {
    return this.representativeStore.submit(representative);
  }
  loadRepresentative(representative) {
    return this.representativeStore.load(representative);
  }
  findRepresentative(representative) {
    return this.representativeStore.find(representative);
  }
}
module.exports = RepresentativeRecordDao;
