class AppointmentSurveyBean {
  exportAppointment(appointment) {
    return this.appointmentStore.export(appointment);
  }
  cancelSurvey(survey) {
    return this.surveyStore.cancel(survey);
  }
  approveAppointment(appointment) {
    return this.appointmentStore.approve(appointment);
  }
}
module.exports = AppointmentSurveyBean;
