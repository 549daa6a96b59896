class WidgetHospitalAction {
  addWidget(widget) {
    return this.widgetStore.add(widget);
  }
  updateHospital(hospital) {
    return this.hospitalStore.update(hospital);
  }
  updateHospital(hospital) {
    return this.hospitalStore.update(hospital);
  }
  assignWidget(widget) {
    return this.widgetStore.assign(widget);
  }
}
module.exports = WidgetHospitalAction;
